"""Exception types shared across the package."""


class WaveQEDError(Exception):
    pass


class ParseError(WaveQEDError):
    """Malformed network document (bad JSON, wrong types, unknown keys)."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ValidationError(WaveQEDError):
    """A well-formed document whose values break a model invariant."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)

    def prefixed(self, prefix: str) -> "ValidationError":
        path = f"{prefix}.{self.path}" if self.path else prefix
        return ValidationError(path, self.message)


class SingularNode(WaveQEDError):
    """|gamma| too small for the transfer matrix 1 - A/gamma; use the direct solve."""

    def __init__(self, gamma: complex, node: int | None = None):
        self.gamma = gamma
        self.node = node
        where = f"node {node}" if node is not None else "node"
        super().__init__(f"{where}: |gamma| = {abs(gamma):.3g} is below the transfer threshold")


class IllConditioned(WaveQEDError):
    def __init__(self, cond: float, what: str = "boundary-condition system"):
        self.cond = cond
        super().__init__(f"{what} has condition number {cond:.3g}")


class SingularDenominator(WaveQEDError):
    def __init__(self, denominator: complex, phi: float | None = None):
        self.denominator = denominator
        self.phi = phi
        msg = f"interferometer denominator |D| = {abs(denominator):.3g}"
        if phi is not None:
            msg += f" at phi = {phi!r}"
        super().__init__(msg)
