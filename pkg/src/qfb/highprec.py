"""Extended-precision lane for cancellation-dominated quadratures.

The Jackson sums behind the expansion coefficients cancel to results far
below their largest term: the k-th coefficient integral resolves only past
~ (k - 1/2)^2 log10(1/q) digits, and re-extracting coefficients from a
partial sum needs the zeros themselves to comparable accuracy.  binary64
carries the whole library; the checks in this module re-run those specific
discrete sums under mpmath so the numeric-vs-closed-form comparisons can be
made at their stated tolerances even where that exceeds double precision.

The evaluation strategy mirrors the float lane: the product-form series
with per-zero factor tables, and zero offsets eps_k solved by the
fixed-point map eps <- log_p(1 - B(eps)/A(eps)) obtained by isolating the
single factor (1 - p^eps) that vanishes at the zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp


def _poch(a, p, n: int):
    out = mp.mpf(1)
    x = mp.mpf(a)
    for _ in range(n):
        out *= 1 - x
        x *= p
    return out


def _poch_inf(a, p):
    out = mp.mpf(1)
    x = mp.mpf(a)
    floor = mp.mpf(10) ** (-(mp.mp.dps + 8))
    while abs(x) > floor:
        out *= 1 - x
        x *= p
    return out


def _series_coeffs(p, order, count: int):
    """m_i = p^(i(i+1)/2 + order*i) / (p; p)_i for i = 0..count-1."""
    out = [mp.mpf(1)]
    for i in range(count - 1):
        out.append(out[-1] * p ** (i + 1 + order) / (1 - p ** (i + 1)))
    return out


def _tail_len(p) -> int:
    return int(math.ceil((mp.mp.dps + 8) * math.log(10) / float(-mp.log(p)))) + 4


def solve_zero_offset(q, nu, k: int):
    """eps_k with j_k = q^(-k + eps_k), to working precision.

    Splits the product-form series at the factor (1 - p^eps); the zero
    condition becomes p^eps = 1 + B/A with A the head group (the factor
    removed) and B the tail group, and the induced fixed-point map
    contracts hard because A and B barely depend on eps.
    """
    q = mp.mpf(q)
    nu = mp.mpf(nu)
    p = q * q
    tail = _tail_len(p)
    n_series = k + tail
    ms = _series_coeffs(p, nu, n_series + 1)

    def groups(eps):
        # factor list f_s = 1 - p^(s - k + eps), s = 1..S, with s = k skipped
        # in the head suffixes
        S = k + tail
        fs = [mp.mpf(0)] * (S + 1)
        for s in range(1, S + 1):
            fs[s] = 1 - p ** (s - k + eps)
        t_suf = [mp.mpf(1)] * (S + 2)  # t_suf[i] = prod_(s>i) f_s, i >= k
        for s in range(S, k, -1):
            t_suf[s - 1] = fs[s] * t_suf[s]
        head = [mp.mpf(1)] * (k + 1)  # head[i] = prod_(i < s <= k-1) f_s
        for i in range(k - 2, -1, -1):
            head[i] = fs[i + 1] * head[i + 1]
        a_sum = mp.mpf(0)
        for i in range(k):
            term = ms[i] * head[i] * t_suf[k]
            a_sum += -term if i % 2 else term
        b_sum = mp.mpf(0)
        floor = mp.mpf(10) ** (-(mp.mp.dps + 8))
        for i in range(k, n_series + 1):
            term = ms[i] * t_suf[i]
            b_sum += -term if i % 2 else term
            if abs(term) < floor * (abs(b_sum) + floor):
                break
        return a_sum, b_sum

    eps = mp.mpf(0)
    ln_p = mp.log(p)
    for _ in range(40):
        a_sum, b_sum = groups(eps)
        nxt = mp.log1p(b_sum / a_sum) / ln_p  # log1p keeps eps << 10^-dps alive
        if nxt <= 0:
            raise ArithmeticError(f"zero-offset fixed point left (0, inf) at k={k}")
        if abs(nxt - eps) <= mp.mpf(10) ** (-(mp.mp.dps - 2)) * nxt:
            return nxt
        eps = nxt
    raise ArithmeticError(f"zero-offset fixed point did not settle at k={k}")


class ZeroColumn:
    """J_order(q^m j_k; q^2) for all shifts m >= 0 of one zero, precomputed.

    One factor table g(d) = 1 - p^(d + eps_k) serves every shift, because
    changing m only slides an integer window over the same exponents.
    """

    def __init__(self, q, nu_zero, order, k: int, eps):
        self.q = q = mp.mpf(q)
        self.p = p = q * q
        self.order = order = mp.mpf(order)
        self.k = k
        self.eps = eps = mp.mpf(eps)
        tail = _tail_len(p)
        self.d_lo = 1 - k
        self.d_hi = tail
        # suffix products over the shared factor table; expm1 keeps the d = 0
        # factor 1 - p^eps alive even when eps is far below 10^-dps
        ln_p = mp.log(p)
        suf = [mp.mpf(1)] * (self.d_hi - self.d_lo + 2)
        for idx in range(self.d_hi - self.d_lo, -1, -1):
            d = self.d_lo + idx
            suf[idx] = -mp.expm1((d + eps) * ln_p) * suf[idx + 1]
        self._suf = suf
        self._ms = _series_coeffs(p, order, k + tail + 2)
        self._pp_inf = _poch_inf(p, p)
        self._floor = mp.mpf(10) ** (-(mp.mp.dps + 6))

    def _suffix(self, d0: int):
        if d0 > self.d_hi:
            return mp.mpf(1)
        return self._suf[d0 - self.d_lo]

    def j_at(self, m: int):
        """J_order(q^m j_k; q^2)."""
        k, eps = self.k, self.eps
        total = mp.mpf(0)
        peak = mp.mpf(0)
        for i, mi in enumerate(self._ms):
            term = mi * self._suffix(i + 1 + m - k)
            total += -term if i % 2 else term
            peak = max(peak, abs(term))
            if i > max(4, k - m + 2) and abs(term) < self._floor * peak:
                break
        xpow = self.p ** (self.order * (m - k + eps) / 2)
        return xpow / self._pp_inf * total


def bessel_j_prime_mp(q, nu, z):
    """d/dz J_nu(z; q^2) by the direct differentiated series (mp)."""
    q = mp.mpf(q)
    nu = mp.mpf(nu)
    p = q * q
    z = mp.mpf(z)
    pref = _poch_inf(p ** (nu + 1), p) / _poch_inf(p, p)
    total = mp.mpf(0)
    term = z ** nu
    peak = mp.mpf(0)
    floor = mp.mpf(10) ** (-(mp.mp.dps + 6))
    for n in range(100_000):
        contrib = (2 * n + nu) * term / z
        total += contrib
        peak = max(peak, abs(contrib))
        term *= -(z * z) * p ** (n + 1) / ((1 - p ** (nu + 1 + n)) * (1 - p ** (n + 1)))
        if n > 4 and abs(term) * (2 * n + 2 + nu) / z < floor * peak:
            break
    return pref * total


@dataclass
class _Zero:
    k: int
    eps: object
    value: object


def _zeros_mp(q, nu, kmax: int) -> list[_Zero]:
    q = mp.mpf(q)
    out = []
    for k in range(1, kmax + 1):
        eps = solve_zero_offset(q, nu, k)
        out.append(_Zero(k, eps, q ** (-k + eps)))
    return out


def _eta_mp(q, nu, col: ZeroColumn, zk: _Zero):
    q = mp.mpf(q)
    nu = mp.mpf(nu)
    jp = bessel_j_prime_mp(q, nu, zk.value)
    return -(1 - q) * q ** (nu - 2) / (2 * zk.value) * col.j_at(1) * jp


def _coefficient_quadrature(q, nu, col: ZeroColumn, eta, f_at_node, depth: int):
    """a_k = (1/eta) (1-q) sum_l q^(2l) f(q^l) J_nu(q^(l+1) j_k; q^2)."""
    q = mp.mpf(q)
    total = mp.mpf(0)
    peak = mp.mpf(0)
    floor = mp.mpf(10) ** (-(mp.mp.dps + 4))
    for l in range(depth):
        term = q ** (2 * l) * f_at_node(l) * col.j_at(l + 1)
        total += term
        peak = max(peak, abs(term))
        if l > 3 * col.k + 8 and abs(term) < floor * peak:
            break
    return (1 - q) * total / eta


def _quad_depth(q, nu, dps: int) -> int:
    return int(math.ceil(dps * math.log(10) / ((2 + float(nu)) * math.log(1 / float(q))))) + 40


def power_coefficient_agreement(q: float, nu: float, k_max: int, dps: int = 60) -> float:
    """max over k <= k_max of the relative gap between the numeric quadrature
    coefficient of f = t^nu and its closed form -2/(q^nu j_k J_nu'(j_k))."""
    with mp.workdps(dps):
        qm, num = mp.mpf(q), mp.mpf(nu)
        depth = _quad_depth(qm, num, dps)
        worst = mp.mpf(0)
        for zk in _zeros_mp(qm, num, k_max):
            col = ZeroColumn(qm, num, num, zk.k, zk.eps)
            eta = _eta_mp(qm, num, col, zk)
            a_num = _coefficient_quadrature(
                qm, num, col, eta, lambda l: qm ** (l * num), depth)
            jp = bessel_j_prime_mp(qm, num, zk.value)
            a_closed = -2 / (qm ** num * zk.value * jp)
            worst = max(worst, abs(a_num - a_closed) / abs(a_closed))
        return float(worst)


def g_coefficient_agreement(q: float, nu: float, mu: float, k_max: int,
                            dps: int = 55) -> float:
    """max over k <= k_max of the relative gap between the numeric quadrature
    coefficient of the product-ratio target and its closed form."""
    with mp.workdps(dps):
        qm, num, mum = mp.mpf(q), mp.mpf(nu), mp.mpf(mu)
        p = qm * qm
        depth = _quad_depth(qm, num, dps)

        gcache: dict[int, object] = {}

        def g_at(l: int):
            if l not in gcache:
                x2 = qm ** (2 * l)
                gcache[l] = (qm ** (l * num)
                             * _poch_inf(x2 * p, p)
                             / _poch_inf(x2 * qm ** (2 * (mum - num)), p))
            return gcache[l]

        const = _poch_inf(p, p) / _poch_inf(qm ** (2 * (mum - num)), p)
        worst = mp.mpf(0)
        for zk in _zeros_mp(qm, num, k_max):
            col = ZeroColumn(qm, num, num, zk.k, zk.eps)
            col_mu = ZeroColumn(qm, num, mum, zk.k, zk.eps)
            col_nu1 = ZeroColumn(qm, num, num + 1, zk.k, zk.eps)
            eta = _eta_mp(qm, num, col, zk)
            a_num = _coefficient_quadrature(qm, num, col, eta, g_at, depth)
            jp = bessel_j_prime_mp(qm, num, zk.value)
            a_closed = (-2 * qm ** (1 - mum) * zk.value ** (num - mum) * const
                        * col_mu.j_at(1) / (col_nu1.j_at(1) * jp))
            worst = max(worst, abs(a_num - a_closed) / abs(a_closed))
        return float(worst)


def roundtrip_agreement(q: float, nu: float, k_sum: int = 40, k_check: int = 20,
                        dps: int = 160) -> float:
    """Round-trip defect of coefficient re-extraction from a partial sum.

    Builds S = sum_(k<=k_sum) a_k J_nu(q j_k x) for the power-target closed
    forms, re-extracts b_k by the quadrature, and returns
    max_(k<=k_check) |b_k - a_k| / |a_k|.
    """
    with mp.workdps(dps):
        qm, num = mp.mpf(q), mp.mpf(nu)
        zs = _zeros_mp(qm, num, k_sum)
        cols = [ZeroColumn(qm, num, num, z.k, z.eps) for z in zs]
        a = [-2 / (qm ** num * z.value * bessel_j_prime_mp(qm, num, z.value))
             for z in zs]
        etas = [_eta_mp(qm, num, c, z) for c, z in zip(cols, zs)]

        depth = _quad_depth(qm, num, dps)
        jtab = [[c.j_at(l + 1) for l in range(depth)] for c in cols]
        s_at = [sum(a[i] * jtab[i][l] for i in range(k_sum)) for l in range(depth)]

        worst = mp.mpf(0)
        for i in range(k_check):
            total = mp.mpf(0)
            for l in range(depth):
                total += qm ** (2 * l) * s_at[l] * jtab[i][l]
            b = (1 - qm) * total / etas[i]
            worst = max(worst, abs(b - a[i]) / abs(a[i]))
        return float(worst)
