"""Independent brute-force oracles shared by the unit and acceptance suites.

These deliberately avoid the package's own code paths: exact rational
arithmetic for Bayes posteriors, and a plain threshold scan for Gini
splits.
"""

from fractions import Fraction


def nb_posterior_bruteforce(X_train, y_train, alpha, query):
    """Exact multinomial Bayes posterior via rational arithmetic.

    Enumerates P(c) * prod_t P(t|c)^count directly, with Laplace-smoothed
    token probabilities, and normalizes.
    """
    classes = sorted(set(y_train))
    n, V = len(y_train), len(X_train[0])
    alpha = Fraction(alpha)
    posteriors = []
    for c in classes:
        rows = [x for x, y in zip(X_train, y_train) if y == c]
        prior = Fraction(len(rows), n)
        token_totals = [sum(r[j] for r in rows) for j in range(V)]
        denom = sum(token_totals) + alpha * V
        likelihood = Fraction(1)
        for j, count in enumerate(query):
            p_token = (token_totals[j] + alpha) / denom
            likelihood *= p_token ** count
        posteriors.append(prior * likelihood)
    total = sum(posteriors)
    return [float(p / total) for p in posteriors]


def gini_best_split_bruteforce(xs, ys):
    """Scan every midpoint threshold on a 1-D sample; first minimum wins.

    Returns (weighted_gini, threshold) or None when no split exists.
    """

    def gini(labels):
        if not labels:
            return 0.0
        return 1.0 - sum((labels.count(c) / len(labels)) ** 2 for c in set(labels))

    values = sorted(set(xs))
    best = None
    for a, b in zip(values, values[1:]):
        threshold = (a + b) / 2
        left = [y for x, y in zip(xs, ys) if x <= threshold]
        right = [y for x, y in zip(xs, ys) if x > threshold]
        weighted = (len(left) * gini(left) + len(right) * gini(right)) / len(xs)
        if best is None or weighted < best[0] - 1e-12:
            best = (weighted, threshold)
    return best
