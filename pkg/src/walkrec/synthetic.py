"""Block-structured synthetic interaction generator for desk-scale experiments.

Users and items are partitioned into aligned groups; candidate purchases
appear with probability p_in inside a user's own group and p_out outside,
and each user keeps a uniform subsample of its candidates.  Subsample
sizes follow a two-point mixture: most users are light buyers and a small
fraction are heavy buyers, mimicking the skewed purchase frequencies of
real logs.  The heavy tail is what keeps the graph connected when the
training set is sparsified, so transitive user-item evidence stays
measurable exactly where direct evidence runs out.
"""

import numpy as np

__all__ = ["generate_synthetic"]


def generate_synthetic(n_users=500, n_items=500, n_groups=10, bulk_degree=4,
                       heavy_degree=12, heavy_fraction=0.125, p_in=0.5,
                       p_out=0.005, seed=0):
    """Draw a clustered sparse interaction set as (user_key, item_key) pairs.

    Args:
        n_users, n_items: catalog sizes; keys are "u<idx>" / "i<idx>",
            zero-padded so lexicographic order matches index order.
        n_groups: number of aligned user/item communities.
        bulk_degree: subsample size for ordinary users.
        heavy_degree: subsample size for heavy users.
        heavy_fraction: probability that a user is heavy; the mean degree
            is (1 - heavy_fraction) * bulk_degree + heavy_fraction *
            heavy_degree (about 5 with the defaults).
        p_in: candidate-edge probability inside the user's group.
        p_out: candidate-edge probability across groups.
        seed: generator seed; output is a pure function of the arguments.
    """
    if n_groups < 1 or n_groups > min(n_users, n_items):
        raise ValueError("n_groups must be in [1, min(n_users, n_items)]")
    if not (0.0 <= p_out <= p_in <= 1.0):
        raise ValueError("need 0 <= p_out <= p_in <= 1")
    if bulk_degree < 1 or heavy_degree < 1:
        raise ValueError("degrees must be >= 1")
    if not 0.0 <= heavy_fraction <= 1.0:
        raise ValueError("heavy_fraction must be in [0, 1]")

    rng = np.random.default_rng(seed)
    user_group = (np.arange(n_users) * n_groups) // n_users
    item_group = (np.arange(n_items) * n_groups) // n_items
    same = user_group[:, None] == item_group[None, :]
    prob = np.where(same, p_in, p_out)
    cand = rng.random((n_users, n_items)) < prob
    degrees = np.where(rng.random(n_users) < heavy_fraction,
                       heavy_degree, bulk_degree)

    width = len(str(n_users - 1))
    iwidth = len(str(n_items - 1))
    pairs = set()
    for u in range(n_users):
        idx = np.flatnonzero(cand[u])
        if len(idx) == 0:
            # degenerate draw: give the user one uniform in-group item
            own = np.flatnonzero(item_group == user_group[u])
            idx = np.asarray([own[int(rng.random() * len(own))]])
        take = min(int(degrees[u]), len(idx))
        chosen = rng.choice(idx, size=take, replace=False)
        for i in chosen:
            pairs.add((f"u{u:0{width}d}", f"i{int(i):0{iwidth}d}"))
    return pairs
