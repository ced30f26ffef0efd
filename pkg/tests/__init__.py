# bchhun, {4/26/19}

from . import testMetrics
