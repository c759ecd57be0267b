"""Configure Django for pytest, as ``manage.py test`` would."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'wells_project.settings')
django.setup()
