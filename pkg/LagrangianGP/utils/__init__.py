from . import (ConfigReader, modelIO)
