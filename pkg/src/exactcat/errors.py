"""Exception hierarchy.  Every :class:`ExactCatError` is a domain error."""


class ExactCatError(Exception):
    """Base class for domain errors (CLI exit status 2)."""


class BackendMismatch(ExactCatError, ValueError):
    pass


class NotAdmissible(ExactCatError):
    """A morphism lacks the admissible factorization an operation needs."""

    def __init__(self, message: str, obstruction=None):
        super().__init__(message)
        self.obstruction = obstruction if obstruction is not None else message


class NotEpi(NotAdmissible):
    pass
