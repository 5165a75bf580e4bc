class CapExceeded(RuntimeError):
    """A configured size cap (basis, linear system, ray dimension) was hit"""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what} size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap
