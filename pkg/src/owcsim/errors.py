"""Exception types shared across the simulator."""


class ConfigError(ValueError):
    """Invalid configuration: bad key, bad value, or violated physical bound."""


class RankDeficientChannelError(ValueError):
    """Channel matrix too close to row-rank deficiency for zero forcing.

    Carries the indices of the users whose channel rows are nearly
    linearly dependent.
    """

    def __init__(self, user_indices, detail=""):
        self.user_indices = tuple(user_indices)
        msg = f"channel matrix is rank deficient; near-dependent user rows: {list(self.user_indices)}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
