"""
Closed-form quota forest counts for graph families.

Every formula here is a specialization of the quota symbol and is checked
against it in the tests.
"""
from fractions import Fraction
from math import comb

from quota_trees.exceptions import QuotaSpecError


def _exact(value: Fraction, label: str) -> int:
    assert value.denominator == 1 and value >= 0, f"{label} is not a count: {value}"  # noqa: S101, E501
    return value.numerator


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise QuotaSpecError(message)


def rose_exact(loops: int, quota: int, portfolio: int) -> int:
    """
    Forests on a single vertex with k loops using exactly s roots.

    :param loops: number of loops k.
    :param quota: quota q.
    :param portfolio: number of roots s.
    :return: s/q * C(kq, q - s), or [q = s] when kq = 0.
    """
    _require(min(loops, quota, portfolio) >= 0, "rose parameters must be nonnegative")
    if portfolio > quota:
        return 0
    if loops * quota == 0:
        return int(quota == portfolio)
    return _exact(
        Fraction(portfolio, quota) * comb(loops * quota, quota - portfolio),
        "rose count",
    )


def rose_at_most(loops: int, quota: int, portfolio: int) -> int:
    """
    Forests on a single vertex with k loops using at most s roots.

    :param loops: number of loops k.
    :param quota: quota q.
    :param portfolio: number of root slots s.
    :return: s/(kq + s) * C(kq + s, q), or [q = 0] when kq + s = 0.
    """
    _require(min(loops, quota, portfolio) >= 0, "rose parameters must be nonnegative")
    total = loops * quota + portfolio
    if total == 0:
        return int(quota == 0)
    return _exact(Fraction(portfolio, total) * comb(total, quota), "rose count")


def catalan_triangle(n: int, k: int) -> int:
    """
    Entry C(n, k) of the Catalan triangle, (n - k + 1)/(n + 1) * C(n + k, k).

    The at-most count of the two-loop rose with quota q and s slots is
    catalan_triangle(q + s - 1, q).

    :param n: row, n >= 0.
    :param k: column, 0 <= k <= n + 1.
    :return: triangle entry, 0 outside the triangle.
    """
    if n < 0 or k < 0 or k > n + 1:
        return 0
    return _exact(Fraction(n - k + 1, n + 1) * comb(n + k, k), "Catalan triangle")


def catalan(n: int) -> int:
    """
    n-th Catalan number.

    :param n: index.
    :return: C(2n, n)/(n + 1).
    """
    return comb(2 * n, n) // (n + 1)


def complete_graph_trees(n: int, quota: int) -> int:
    """
    Trees on K_n, no loops, constant quota q and one root.

    :param n: vertex count, n >= 2.
    :param quota: constant quota q >= 1.
    :return: C((n-1)q, q)^n n^(n-2) / ((n-1)^(n-1) ((n-2)q + 1)).
    """
    _require(n >= 2 and quota >= 1, "needs n >= 2 and q >= 1")
    value = Fraction(comb((n - 1) * quota, quota) ** n * n ** (n - 2))
    value /= (n - 1) ** (n - 1) * ((n - 2) * quota + 1)
    return _exact(value, "complete graph count")


def complete_looped_graph_trees(n: int, quota: int) -> int:
    """
    Trees on K_n with a loop at every vertex, constant quota q and one root.

    :param n: vertex count, n >= 1.
    :param quota: constant quota q >= 1.
    :return: C(nq, q)^n / (n (q(n - 1) + 1)).
    """
    _require(n >= 1 and quota >= 1, "needs n >= 1 and q >= 1")
    value = Fraction(comb(n * quota, quota) ** n, n * (quota * (n - 1) + 1))
    return _exact(value, "looped complete graph count")


def complete_graph_forests(n: int, quota: int, portfolio: int) -> int:
    """
    Forests on K_n with constant quota q and s roots at every vertex.

    :param n: vertex count, n >= 2.
    :param quota: constant quota q >= 1.
    :param portfolio: constant portfolio 1 <= s <= q.
    :return: C((n-1)q, q-s)^n (nq - s)^(n-1) s / ((n-1)^(n-1) q^n).
    """
    _require(n >= 2 and 1 <= portfolio <= quota, "needs n >= 2 and 1 <= s <= q")
    value = Fraction(
        comb((n - 1) * quota, quota - portfolio) ** n
        * (n * quota - portfolio) ** (n - 1)
        * portfolio,
        (n - 1) ** (n - 1) * quota ** n,
    )
    return _exact(value, "complete graph forest count")


def path_graph_trees(n: int, quota: int, internal_root: bool = False) -> int:
    """
    Trees on the two-way path P_n with constant quota q and one root.

    With a_q = C(2q, q)/2 and c_q = C(2q + 1, q)/(2q + 1), a root at an end
    gives a_q^(n-2) and a root at an internal vertex gives c_q a_q^(n-3).

    :param n: vertex count, n >= 2, n >= 3 for an internal root.
    :param quota: constant quota q >= 1.
    :param internal_root: root at an internal vertex instead of an end.
    :return: tree count.
    """
    _require(quota >= 1, "needs q >= 1")
    end_factor = comb(2 * quota, quota) // 2
    if not internal_root:
        _require(n >= 2, "a path needs two vertices")
        return end_factor ** (n - 2)
    _require(n >= 3, "an internal root needs n >= 3")
    middle_factor = comb(2 * quota + 1, quota) // (2 * quota + 1)
    return middle_factor * end_factor ** (n - 3)


def cycle_graph_trees(n: int, quota: int) -> int:
    """
    Trees on the two-way cycle C_n with constant quota q and one root.

    :param n: vertex count, n >= 3.
    :param quota: constant quota q >= 1.
    :return: 2n a_q^n / (q + 1) with a_q = C(2q, q)/2.
    """
    _require(n >= 3 and quota >= 1, "needs n >= 3 and q >= 1")
    end_factor = comb(2 * quota, quota) // 2
    return _exact(Fraction(2 * n * end_factor ** n, quota + 1), "cycle count")


def cayley(n: int) -> int:
    """
    Labelled trees on n vertices, the q = 1 case of complete_graph_trees.

    :param n: vertex count, n >= 1.
    :return: n^(n-2).
    """
    _require(n >= 1, "needs n >= 1")
    if n == 1:
        return 1
    return n ** (n - 2)
