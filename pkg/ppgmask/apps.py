from django.apps import AppConfig


class PpgmaskConfig(AppConfig):
    """
    Configuration for the ppgmask Django app.
    """

    name = "ppgmask"
    verbose_name = "PPG masked pretraining"
