class DomainError(ValueError):
    """An input outside a formula's domain (unstable load, N < 2, ...)."""


class InfeasibleSizing(DomainError):
    """No positive packet count satisfies the requested delay equality.

    ``users`` is the integer user count tried; ``constraint`` names the
    violated condition on it and ``bound`` its threshold value.
    """

    def __init__(self, users, bound, constraint):
        self.users = users
        self.bound = bound
        self.constraint = constraint
        super().__init__(f"infeasible: m = {users} violates {constraint}")
