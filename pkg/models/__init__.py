from .geometry import Point3, ServiceArea, AntennaArray
from .crlb import RangeModel, FisherInfo, CrlbValue, SquareGridSpec
from .estimation import RangeSample
from .field import CrlbField, SweepCurve
