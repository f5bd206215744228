"""Third Jackson (Hahn-Exton) q-Bessel function J_nu(z; q^2) and relatives.

Two evaluation routes are used, switched on the argument size:

* power series in z^2 (base q^2) for z <= 1/q, summed with compensated
  addition and a certified alternating/geometric tail bound;
* a product-form rearrangement for larger z, obtained from the symmetry of
  (c; p)_inf * sum_k (-1)^k p^(k(k-1)/2) w^k / ((p;p)_k (c;p)_k) under
  (c, w) exchange, which moves the violent growth of the series into
  infinite products (1 - p^(s+w0)) evaluated factor by factor:

      J_nu(x; p) = x^nu / (p;p)_inf *
                   sum_i (-1)^i p^(i(i+1)/2 + nu*i) (p^(i+1) x^2; p)_inf / (p;p)_i

  with p = q^2.  The direct series cancels catastrophically near the large
  zeros (the true value is exponentially smaller than the largest term);
  the product form keeps full relative precision there, because the
  smallness is carried by a single factor 1 - p^eps computed with expm1.

bessel_j_qpow accepts the argument as q^(n + frac) with the fractional
exponent passed exactly, which is how zero-related quantities q^m j_k are
evaluated without losing the tiny offset eps_k to float rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .qcore import QContext, NonConvergentTail, q_pochhammer, _kahan_add

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class BesselEval:
    """One function evaluation with its certification data.

    tail_bound is an absolute bound on |returned - true| combining the
    truncation remainder with a rounding estimate; peak records the largest
    intermediate contribution, so peak/|value| measures the cancellation
    the evaluation had to survive.
    """

    value: float
    terms_used: int
    tail_bound: float
    peak: float

    @property
    def condition(self) -> float:
        if self.value == 0.0:
            return math.inf
        return self.peak / abs(self.value)


def _prefactor(ctx: QContext, order: float) -> float:
    """(p^(order+1); p)_inf / (p; p)_inf in base p = q^2."""
    p = ctx.p
    num = q_pochhammer(p**(order + 1.0), p, math.inf, term_tol=1e-17)
    den = q_pochhammer(p, p, math.inf, term_tol=1e-17)
    return num / den


def _series_eval(ctx: QContext, order: float, z: float) -> BesselEval:
    """Direct power series; intended for z <= 1/q where cancellation is mild."""
    p, tol = ctx.p, ctx.term_tol
    pref = z**order * _prefactor(ctx, order)
    if not math.isfinite(pref):
        raise OverflowError(f"z^nu prefactor overflows at z={z}, order={order}")

    total = comp = 0.0
    term = 1.0
    abs_sum = 0.0
    peak = 0.0
    ratio = math.inf
    used = 0
    omitted = 0.0
    for k in range(ctx.max_terms):
        total, comp = _kahan_add(total, comp, term)
        abs_sum += abs(term)
        peak = max(peak, abs(term))
        used = k + 1
        nxt = term * (-(z * z) * p**(k + 1)) / ((1.0 - p**(order + 1.0 + k)) * (1.0 - p**(k + 1)))
        ratio = abs(nxt / term) if term != 0.0 else 0.0
        term = nxt
        scale = max(abs(total), peak)
        if k >= 2 and ratio < 1.0 and abs(term) <= tol * scale:
            r_eff = min(ratio, p)
            if abs(term) / (1.0 - r_eff) <= tol * scale:
                omitted = abs(term) / (1.0 - r_eff)
                break
    else:
        raise NonConvergentTail(f"q-Bessel series not converged in {ctx.max_terms} terms")

    value = pref * total
    rounding = (2.0 * used + 8.0) * _EPS * abs(pref) * (abs_sum + abs(total))
    return BesselEval(value, used, abs(pref) * omitted + rounding, abs(pref) * peak)


def _product_eval(ctx: QContext, order: float, w_int: int, w_frac: float,
                  frac_err: float) -> BesselEval:
    """Product-form evaluation at x with x^2 = p^(w_int + w_frac).

    frac_err is the absolute uncertainty of w_frac; it feeds the error
    bound through the most nearly vanishing product factor.
    """
    p, tol = ctx.p, ctx.term_tol
    ln_p = 2.0 * math.log(ctx.q)

    # factor table f_s = 1 - p^(s + w0); exponents past the cut contribute
    # less than ~1e-22 to the log-product
    cut = 22.0 * math.log(10.0) / -ln_p
    n_factors = max(4, int(math.ceil(cut - w_int)) + 2)
    fmin = math.inf
    factors = []
    for s in range(1, n_factors + 1):
        w = (s + w_int) + w_frac
        fs = -math.expm1(w * ln_p)
        factors.append(fs)
        if fs != 0.0:
            fmin = min(fmin, abs(fs))

    # suffix products: G[i] = (p^(i+1) x^2; p)_inf = prod_(s > i) f_s
    suffix = [1.0] * (n_factors + 1)
    for s in range(n_factors, 0, -1):
        suffix[s - 1] = factors[s - 1] * suffix[s]
        if not math.isfinite(suffix[s - 1]):
            raise OverflowError("product form overflows; argument too large")

    total = comp = 0.0
    abs_sum = 0.0
    peak = 0.0
    coeff = 1.0  # p^(i(i+1)/2 + order*i) / (p;p)_i
    used = 0
    omitted = 0.0
    prev_term = 0.0
    min_i = max(4, -w_int + 2)  # leading G may vanish exactly at integer exponents
    for i in range(min(len(suffix) - 1, ctx.max_terms)):
        term = (coeff if i % 2 == 0 else -coeff) * suffix[i]
        total, comp = _kahan_add(total, comp, term)
        abs_sum += abs(term)
        peak = max(peak, abs(term))
        used = i + 1
        coeff *= p**(i + 1.0 + order) / (1.0 - p**(i + 1))
        if coeff == 0.0:
            # every remaining term underflows; bound them by one denormal
            omitted = 5e-324 * abs(suffix[i])
            break
        scale = max(abs(total), peak)
        if i >= min_i and scale > 0.0 and abs(term) <= tol * scale:
            ratio = abs(term / prev_term) if prev_term != 0.0 else 0.0
            r_eff = min(ratio, p) if ratio < 1.0 else p
            nxt = coeff * abs(suffix[i + 1]) if i + 1 < len(suffix) else 0.0
            if nxt / (1.0 - r_eff) <= tol * scale:
                omitted = nxt / (1.0 - r_eff)
                break
        prev_term = term
    else:
        raise NonConvergentTail("product-form series did not settle")

    # x^order = p^(order * w0 / 2)
    log_xpow = order * (w_int + w_frac) * 0.5 * ln_p
    if log_xpow > 700.0:
        raise OverflowError("x^nu overflows in product form")
    xpow = math.exp(log_xpow)
    den = q_pochhammer(p, p, math.inf, term_tol=1e-17)
    pref = xpow / den
    value = pref * total

    rel_noise = _EPS * (8.0 + 2.0 * (used + n_factors))
    if math.isfinite(fmin) and fmin > 0.0:
        rel_noise += frac_err * abs(ln_p) / fmin
    err = pref * omitted + rel_noise * pref * (abs_sum + abs(total))
    return BesselEval(value, used, err, pref * peak)


def bessel_j(ctx: QContext, z: float) -> BesselEval:
    """J_nu(z; q^2) for real z >= 0, order nu = ctx.nu > -1."""
    nu = ctx.nu
    if z < 0.0:
        raise ValueError("bessel_j evaluates real nonnegative arguments only")
    if z == 0.0:
        if nu > 0.0:
            return BesselEval(0.0, 0, 0.0, 0.0)
        if nu == 0.0:
            return BesselEval(1.0, 1, _EPS, 1.0)
        raise ValueError(f"J_nu diverges at z=0 for nu={nu} < 0")
    if z <= 1.0 / ctx.q:
        return _series_eval(ctx, nu, z)
    w = math.log(z) / math.log(ctx.q)  # p-exponent of z^2 equals log_q z
    w_int = round(w)
    w_frac = w - w_int
    frac_err = _EPS * (abs(w) + 2.0)
    return _product_eval(ctx, nu, w_int, w_frac, frac_err)


def bessel_j_qpow(ctx: QContext, n: int, frac: float) -> BesselEval:
    """J_nu(q^(n + frac); q^2) with the fractional exponent given exactly.

    This is the accurate route for arguments q^m j_k = q^(m - k + eps_k):
    call with n = m - k and frac = eps_k.  Full relative precision is kept
    in the nearly cancelling factors 1 - q^(2(n + frac + s)).
    """
    if n + frac >= -1.0:
        z = ctx.q**(n + frac)
        return _series_eval(ctx, ctx.nu, z)
    return _product_eval(ctx, ctx.nu, n, frac, _EPS * (abs(frac) + _EPS))


def bessel_j_prime(ctx: QContext, z: float) -> BesselEval:
    """d/dz J_nu(z; q^2), by exact differentiation of the truncated series.

    Each series term C (-1)^k q^(2k(k+1)) z^(2k+nu) / [...] contributes
    (2k + nu)/z times itself; the sum is well conditioned at the zeros
    j_k (where the pure-series part dominates) and for moderate z.
    """
    nu = ctx.nu
    p, tol = ctx.p, ctx.term_tol
    if z < 0.0:
        raise ValueError("bessel_j_prime evaluates real nonnegative arguments only")
    if z == 0.0:
        if nu == 1.0:
            return BesselEval(_prefactor(ctx, nu), 1, _EPS, 1.0)
        if nu > 1.0 or nu == 0.0:
            return BesselEval(0.0, 0, 0.0, 0.0)
        raise ValueError(f"derivative at 0 is singular for nu={nu}")

    pref = _prefactor(ctx, nu)
    base = z**nu
    if not math.isfinite(base):
        raise OverflowError(f"z^nu overflows at z={z}")
    total = comp = 0.0
    abs_sum = 0.0
    peak = 0.0
    used = 0
    omitted = 0.0
    term = base  # running series term without the derivative weight
    for k in range(ctx.max_terms):
        contrib = (2.0 * k + nu) * term / z
        total, comp = _kahan_add(total, comp, contrib)
        abs_sum += abs(contrib)
        peak = max(peak, abs(contrib))
        used = k + 1
        term = term * (-(z * z) * p**(k + 1)) / ((1.0 - p**(nu + 1.0 + k)) * (1.0 - p**(k + 1)))
        if not math.isfinite(term):
            raise OverflowError("derivative series overflows; argument too large")
        nxt_c = (2.0 * (k + 1) + nu) * abs(term) / z
        scale = max(abs(total), peak)
        if k >= 2 and contrib != 0.0 and nxt_c < abs(contrib) and nxt_c <= tol * scale:
            r_eff = min(nxt_c / abs(contrib), p)
            if nxt_c / (1.0 - r_eff) <= tol * scale:
                omitted = nxt_c / (1.0 - r_eff)
                break
    else:
        raise NonConvergentTail(f"derivative series not converged in {ctx.max_terms} terms")

    value = pref * total
    rounding = (2.0 * used + 8.0) * _EPS * abs(pref) * (abs_sum + abs(total))
    return BesselEval(value, used, abs(pref) * omitted + rounding, abs(pref) * peak)


def check_difference_relation(ctx: QContext, x: float) -> float:
    """Absolute residual of the three-term relation
    J_nu(q^2 x) + q^(-nu) (q^2 x^2 - 1 - q^(2 nu)) J_nu(q x) + J_nu(x) = 0."""
    q, nu = ctx.q, ctx.nu
    j0 = bessel_j(ctx, q * q * x).value
    j1 = bessel_j(ctx, q * x).value
    j2 = bessel_j(ctx, x).value
    coef = q**(-nu) * (q * q * x * x - 1.0 - q**(2.0 * nu))
    return abs(j0 + coef * j1 + j2)


def difference_relation_budget(ctx: QContext, x: float) -> float:
    """Error budget for check_difference_relation from the three evaluations."""
    q, nu = ctx.q, ctx.nu
    e0 = bessel_j(ctx, q * q * x)
    e1 = bessel_j(ctx, q * x)
    e2 = bessel_j(ctx, x)
    coef = abs(q**(-nu) * (q * q * x * x - 1.0 - q**(2.0 * nu)))
    scale = abs(e0.value) + coef * abs(e1.value) + abs(e2.value)
    return e0.tail_bound + coef * e1.tail_bound + e2.tail_bound + 16.0 * _EPS * scale


def check_shift_identity(ctx: QContext, k: int) -> float:
    """Residual |J_nu(q j_k; q^2) - q j_k J_(nu+1)(q j_k; q^2)|."""
    from . import zeros  # deferred: zeros builds on this module

    zk = zeros.find_zero(ctx, k)
    lhs = bessel_j_qpow(ctx, 1 - k, zk.eps_k).value
    rhs = ctx.q * zk.value * bessel_j_qpow(ctx.with_order(ctx.nu + 1.0), 1 - k, zk.eps_k).value
    return abs(lhs - rhs)
