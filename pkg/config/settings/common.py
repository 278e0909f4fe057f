from .base import *
from .apps import *
from .middleware import *
from .templates import *
from .database import *
from .drf import *
from .celery import *
from .logging import *
from .simulation import *
