"""api URL Configuration

Only the admin site is served: classification runs, their step timelines and
catalog builds are browsed there. Everything else goes through manage.py.
"""
from django.contrib import admin
from django.urls import path

urlpatterns = [
    path('admin/', admin.site.urls),
]
