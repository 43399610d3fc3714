class MBKitError(Exception):
    pass


class InputError(MBKitError):
    """Malformed or inconsistent input data.  The CLI maps this to exit 2."""

    def __init__(self, message: str, field: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class CocycleError(InputError):
    def __init__(self, simplex, product: int):
        self.simplex = tuple(simplex)
        super().__init__(
            f"sign cocycle violated on 2-simplex {list(self.simplex)} "
            f"(edge sign product {product})")


class FlowDataError(InputError):
    pass
