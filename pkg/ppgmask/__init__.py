"""
django-ppgmask: PPG preprocessing, spectrum-aware tokenization and
prior-guided masked pretraining, driven by management commands.
"""
