class MdsError(Exception):
    def __init__(self, message: str, status_code: int = 422):
        self.message = message
        self.status_code = status_code
        super().__init__(self.message)

    @property
    def exit_code(self) -> int:
        # usage and parse problems are 2, everything else is a domain failure
        return 2 if self.status_code == 400 else 1


class UsageError(MdsError):
    def __init__(self, message: str):
        super().__init__(message, 400)
