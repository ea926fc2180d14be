"""
URL configuration for hl_lab project.

The lab is driven from management commands; the only web surface is the
Django admin, used to browse sweep runs, checkpoints and result rows.
"""
# hl_lab/urls.py
from django.contrib import admin
from django.urls import path

urlpatterns = [
    path('admin/', admin.site.urls),
]
