"""Exception taxonomy mirrored by the CLI exit codes."""


class ValidationError(ValueError):
    """Scenario or manifest content is unusable (exit code 1)."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class InfeasibleError(RuntimeError):
    """Model has no feasible solution (exit code 2)."""

    def __init__(self, message, certificate=()):
        self.certificate = list(certificate)
        super().__init__(message)


class SolverLimitError(RuntimeError):
    """Search stopped at a resource limit without proof (exit code 3)."""
