"""Exception types shared across the toolkit.

Every error carries enough context to reproduce the failing query: ids are
always raw object/morphism ids of the category they refer to.
"""


class PathcatError(Exception):
    """Base class for all toolkit errors."""


class NotComposable(PathcatError):
    """Composition requested for a pair with cod(f) != dom(g)."""


class MissingEntry(PathcatError):
    """A table-backed category omits a required composition entry."""


class NoTerminal(PathcatError):
    """No object receives exactly one morphism from every object."""


class NoPullback(PathcatError):
    """No object of the category realizes the universal property."""


class MissingPullback(PathcatError):
    """A needed fiber product is absent from the model."""


class MissingSlicePathObject(PathcatError):
    """A slice path object is neither designated nor found by search."""


class NoFiller(PathcatError):
    """Lifting square admits no filler; the square is attached as .square."""

    def __init__(self, message, square=None):
        super().__init__(message)
        self.square = square


class CongruenceFailure(PathcatError):
    """Homotopy fails to respect composition; witness triple attached."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotHomotopical(PathcatError):
    """Functor does not preserve marked weak equivalences."""


class NaturalityFailure(PathcatError):
    """Transformation component fails a naturality square."""


class NotIsofibration(PathcatError):
    """Operation requires an isofibration in the stated position."""


class NotWeakEquivalence(PathcatError):
    """Operation requires a marked weak equivalence in the stated position."""


class MissingPiType(PathcatError):
    """The model cannot provide the required dependent-product object."""


class NoSuitablePf(PathcatError):
    """No path-object transport with (Pf)r = rf exists in the finite model."""


class ResourceCap(PathcatError):
    """An enumeration exceeded its candidate-evaluation budget."""


class ParseError(PathcatError):
    """Document is not syntactically well formed; position attached."""


class SchemaError(PathcatError):
    """Document violates the model schema (field named in message)."""


class Budget:
    """Candidate-evaluation counter; raises ResourceCap past the limit.

    One tick is one slot-assignment trial in a search (an attempted image of
    a basepoint, generator, tree edge, or one table-scan probe).  The limit
    bounds a single enumeration, not the lifetime of a model: each top-level
    search runs against a fresh scope so no one search runs unbounded.
    """

    DEFAULT = 200_000

    def __init__(self, limit=None):
        self.limit = self.DEFAULT if limit is None else limit
        self.used = 0

    def spend(self, n=1):
        self.used += n
        if self.used > self.limit:
            raise ResourceCap(
                f"candidate evaluations exceeded budget ({self.used} > {self.limit})")

    def scope(self):
        """A fresh counter with the same limit, for one enumeration."""
        return Budget(self.limit)
