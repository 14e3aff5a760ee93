"""Exception hierarchy shared by all pipeline stages."""


class HetmapError(ValueError):
    """Base class for data errors raised by the pipeline."""


class EmptyInput(HetmapError):
    pass


class MalformedFile(HetmapError):
    pass


class ShapeError(HetmapError):
    pass


class BadRange(HetmapError):
    pass


class ZeroVector(HetmapError):
    pass


class DegenerateMatrix(HetmapError):
    pass


class BadK(HetmapError):
    pass


class BadFreq(HetmapError):
    pass
