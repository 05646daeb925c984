"""Exception types shared across the package."""


class OuterFormsError(Exception):
    pass


class ParseError(OuterFormsError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        where = "" if position is None else f" at position {position}"
        super().__init__(f"{message}{where}")


class CapacityError(OuterFormsError):
    """A configured bound was exceeded; the answer is not guessed."""

    def __init__(self, bound_name, bound, detail=""):
        self.bound_name = bound_name
        self.bound = bound
        msg = f"capacity exceeded: {bound_name} = {bound}"
        super().__init__(msg + (f" ({detail})" if detail else ""))


class PreconditionError(OuterFormsError):
    pass


class AlgebraMismatch(OuterFormsError):
    pass


class InternalConsistencyError(OuterFormsError):
    pass
