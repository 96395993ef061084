"""Test settings package for django-ppgmask."""
