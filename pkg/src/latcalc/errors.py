"""Exception hierarchy shared by every latcalc module."""


class LatcalcError(Exception):
    """Base class for all library errors."""


class ModelMismatch(LatcalcError):
    pass


class DepthExceeded(LatcalcError):
    pass


class NotInvertibleOnBand(LatcalcError):
    pass


class DomainViolation(LatcalcError):
    pass


class ExprSyntaxError(LatcalcError):
    """Parse failure; ``offset`` is the 0-based character position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifier(ExprSyntaxError):
    pass


class NonSmoothNode(LatcalcError):
    """Raised by symbolic differentiation; ``path`` locates the subtree."""

    def __init__(self, path: tuple, node):
        super().__init__(f"non-smooth node {node!s} at path {list(path)}")
        self.path = path
        self.node = node


class NoConvergence(LatcalcError):
    def __init__(self, atoms):
        super().__init__(f"derivative estimate did not stabilise on atoms {list(atoms)}")
        self.atoms = list(atoms)


class NonPolynomialComplexHandle(LatcalcError):
    pass


class HypothesisViolated(LatcalcError):
    """A theorem hypothesis fails; solvers usually report this instead of raising."""

    def __init__(self, detail: str, witness=None):
        super().__init__(detail)
        self.detail = detail
        self.witness = witness
