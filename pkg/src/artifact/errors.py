"""Exception hierarchy.

Every domain failure derives from :class:`ArtifactError`; the command line
maps these to exit status 1.
"""


class ArtifactError(Exception):
    pass


# graph construction and augmentation
class NoPath(ArtifactError):
    pass


class UnknownComponent(ArtifactError):
    def __init__(self, name):
        super().__init__(f"unknown component: {name!r}")
        self.name = name


class ParentDisconnected(ArtifactError):
    pass


class CannotAugment(ArtifactError):
    pass


class NotTraceable(ArtifactError):
    pass


class TooLarge(ArtifactError):
    pass


# solvers
class Infeasible(ArtifactError):
    pass


class NotEnoughPaths(ArtifactError):
    pass


class TooLargeForExact(TooLarge):
    pass


# loaders
class ParseError(ArtifactError):
    def __init__(self, line_no, content, reason="malformed line"):
        super().__init__(f"line {line_no}: {reason}: {content!r}")
        self.line_no = line_no
        self.content = content


class NegativeStrength(ParseError):
    def __init__(self, line_no, content):
        super().__init__(line_no, content, "negative strength")


class NonPositiveStrength(ArtifactError):
    pass


class DimensionMismatch(ArtifactError):
    def __init__(self, line_no, expected, got):
        super().__init__(f"line {line_no}: expected {expected} values, got {got}")
        self.line_no = line_no


class DuplicateToken(ArtifactError):
    def __init__(self, token):
        super().__init__(f"duplicate token: {token!r}")
        self.token = token


class UnknownToken(ArtifactError):
    def __init__(self, token):
        super().__init__(f"unknown token: {token!r}")
        self.token = token


class NoComponentsFound(ArtifactError):
    pass


class TooFewTokens(ArtifactError):
    pass


class DegenerateInput(ArtifactError):
    pass
