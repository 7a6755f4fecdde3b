"""Compiled numerical kernels.

Everything here works in log space: modified spherical Bessel functions are
carried as ``log(i_n(x) e^{-x})`` and ``log(k_n(x) e^{+x})`` so that products
pairing one growing and one decaying factor never overflow, with the residual
exponent ``2*x0 - a - b`` folded in exactly once per series term.

Sign conventions (all arguments real and positive):
  * ``i_n``, ``k_n`` and the Riccati combination ``[x i_n(x)]'`` are positive;
  * ``[x k_n(x)]'`` is negative; its log-magnitude is stored and the sign is
    applied analytically where the value is used.
"""

import math

import numpy as np
from numba import njit

LOG_HALF_PI = math.log(math.pi / 2.0)


@njit(cache=True, nogil=True)
def _logadd(a, b):
    # log(e^a + e^b) without overflow; tolerates -inf
    if a < b:
        a, b = b, a
    if b == -np.inf:
        return a
    return a + math.log1p(math.exp(b - a))


@njit(cache=True, nogil=True)
def bessel_ik_logs(n_top, x):
    """Log-scaled modified spherical Bessel tables for n = 0..n_top.

    Returns (Li, Lk, LiR, LkR):
      Li[n]  = log( i_n(x) e^{-x} )
      Lk[n]  = log( k_n(x) e^{+x} )
      LiR[n] = log( [x i_n(x)]' e^{-x} )
      LkR[n] = log( -[x k_n(x)]' e^{+x} )   (the derivative itself is negative)

    i-family by downward Miller recurrence normalized at n = 0, k-family by
    upward recurrence; both directions are the stable ones.
    """
    Li = np.empty(n_top + 1)
    Lk = np.empty(n_top + 1)
    LiR = np.empty(n_top + 1)
    LkR = np.empty(n_top + 1)
    lx = math.log(x)

    # k_0 = (pi/2) e^{-x}/x, k_1 = (pi/2) e^{-x}(x+1)/x^2
    Lk[0] = LOG_HALF_PI - lx
    if n_top >= 1:
        Lk[1] = LOG_HALF_PI + math.log1p(x) - 2.0 * lx
    for n in range(1, n_top):
        Lk[n + 1] = _logadd(Lk[n - 1], math.log(2.0 * n + 1.0) - lx + Lk[n])

    # Miller: seed two orders above anything requested, recur down, normalize.
    n_start = n_top + max(20, int(math.ceil(x)))
    lp_up = -np.inf  # trial value at n_start + 1
    lp = 0.0         # trial value at n_start
    for n in range(n_start, 0, -1):
        lp_down = _logadd(lp_up, math.log(2.0 * n + 1.0) - lx + lp)
        if n <= n_top:
            Li[n] = lp
        lp_up = lp
        lp = lp_down
    Li[0] = lp
    # i_0(x) e^{-x} = (1 - e^{-2x}) / (2x)
    shift = (math.log(-math.expm1(-2.0 * x)) - math.log(2.0 * x)) - Li[0]
    for n in range(n_top + 1):
        Li[n] += shift

    # Riccati combinations:
    #   [x i_n]' = x i_{n-1} - n i_n  (n >= 1),  [x i_0]' = i_0 + x i_1
    #   [x k_n]' = -(x k_{n-1} + n k_n)          (k_{-1} = k_0)
    if n_top >= 1:
        LiR[0] = _logadd(Li[0], lx + Li[1])
    else:
        LiR[0] = Li[0]  # n_top = 0 never used by the series; placeholder
    LkR[0] = LOG_HALF_PI
    for n in range(1, n_top + 1):
        arg = Li[n] + math.log(float(n)) - Li[n - 1] - lx
        if arg > -1e-18:
            arg = -1e-18
        LiR[n] = Li[n - 1] + lx + math.log1p(-math.exp(arg))
        LkR[n] = _logadd(lx + Lk[n - 1], math.log(float(n)) + Lk[n])
    return Li, Lk, LiR, LkR


@njit(cache=True, nogil=True)
def legendre_pf(n_top, g):
    """Legendre P_n(g), P_n'(g) and F_n(g) = n(n+1)P_n - g P_n' for n = 0..n_top.

    Three-term recurrence for P_n; derivative from n(P_{n-1} - g P_n)/(1-g^2),
    with the closed endpoint formula P_n'(+-1) = (+-1)^{n+1} n(n+1)/2.
    """
    P = np.empty(n_top + 1)
    Pp = np.empty(n_top + 1)
    F = np.empty(n_top + 1)
    P[0] = 1.0
    Pp[0] = 0.0
    F[0] = 0.0
    if n_top == 0:
        return P, Pp, F
    P[1] = g
    for n in range(1, n_top):
        P[n + 1] = ((2.0 * n + 1.0) * g * P[n] - n * P[n - 1]) / (n + 1.0)
    at_end = abs(g) == 1.0
    one_m_g2 = 1.0 - g * g
    for n in range(1, n_top + 1):
        if at_end:
            # P_n'(+1) = n(n+1)/2; P_n'(-1) = (-1)^{n+1} n(n+1)/2
            if g > 0.0:
                sgn = 1.0
            else:
                sgn = 1.0 if (n + 1) % 2 == 0 else -1.0
            Pp[n] = sgn * 0.5 * n * (n + 1.0)
        else:
            Pp[n] = n * (P[n - 1] - g * P[n]) / one_m_g2
        F[n] = n * (n + 1.0) * P[n] - g * Pp[n]
    return P, Pp, F


@njit(cache=True, nogil=True)
def scatter_series_sums(n_top, rel_tol, n_consec, u, r_a, r_b, radius,
                        eps, mu, P, Pp, F):
    """Raw multipole sums for the five scattering Green-tensor elements at iu.

    Returns (sums[5], n_used, converged) with sums ordered
    (rr, rtheta, thetar, thetatheta, phiphi) *before* geometric prefactors:

      rr element        = sums[0] / (4 pi u r_a r_b)
      rtheta element    = -sin(Theta) sums[1] / (4 pi u r_a r_b)
      thetar element    = -sin(Theta) sums[2] / (4 pi u r_a r_b)
      thetatheta element= u sums[3] / (4 pi)
      phiphi element    = u sums[4] / (4 pi)

    Truncation: stop once the last n_consec consecutive orders each contribute
    less than rel_tol relative to the running partial sum of every element.
    """
    sums = np.zeros(5)
    x0 = u * radius
    x1 = math.sqrt(eps * mu) * x0
    a = u * r_a
    b = u * r_b
    e_log = 2.0 * x0 - a - b

    Li0, Lk0, LiR0, LkR0 = bessel_ik_logs(n_top, x0)
    if x1 == x0:
        Li1, LiR1 = Li0, LiR0
    else:
        Li1, _, LiR1, _ = bessel_ik_logs(n_top, x1)
    _, Lka, _, LkRa = bessel_ik_logs(n_top, a)
    if b == a:
        Lkb, LkRb = Lka, LkRa
    else:
        _, Lkb, _, LkRb = bessel_ik_logs(n_top, b)

    leps = math.log(eps)
    lmu = math.log(mu)
    lu2rr = 2.0 * math.log(u) + math.log(r_a) + math.log(r_b)

    good = 0
    n_used = n_top
    converged = False
    for n in range(1, n_top + 1):
        # numerators: eps(mu) * [x i]'(x0) i(x1) - [x i]'(x1) i(x0)
        tb = LiR1[n] + Li0[n]
        ta = LiR0[n] + Li1[n]
        ta_n = leps + ta
        if ta_n >= tb:
            s_num_n = 1.0
            l_num_n = ta_n + math.log1p(-math.exp(tb - ta_n)) if tb != ta_n else -np.inf
        else:
            s_num_n = -1.0
            l_num_n = tb + math.log1p(-math.exp(ta_n - tb))
        ta_m = lmu + ta
        if ta_m >= tb:
            s_num_m = 1.0
            l_num_m = ta_m + math.log1p(-math.exp(tb - ta_m)) if tb != ta_m else -np.inf
        else:
            s_num_m = -1.0
            l_num_m = tb + math.log1p(-math.exp(ta_m - tb))
        # denominators are negative with magnitude
        #   eps(mu) * |[x k]'(x0)| i(x1) + [x i]'(x1) k(x0)
        l_den_n = _logadd(leps + LkR0[n] + Li1[n], LiR1[n] + Lk0[n])
        l_den_m = _logadd(lmu + LkR0[n] + Li1[n], LiR1[n] + Lk0[n])
        s_bn = -s_num_n
        l_bn = l_num_n - l_den_n
        s_bm = -s_num_m
        l_bm = l_num_m - l_den_m

        lq1 = Lka[n] + Lkb[n]
        lq2 = Lka[n] + LkRb[n]   # value negative
        lq3 = LkRa[n] + Lkb[n]   # value negative
        lq4 = LkRa[n] + LkRb[n]  # value positive

        fn = float(n)
        nn1 = fn * (fn + 1.0)
        two_n1 = 2.0 * fn + 1.0

        bn_q1 = s_bn * math.exp(l_bn + lq1 + e_log)
        t_rr = nn1 * two_n1 * P[n] * bn_q1
        t_rt = two_n1 * Pp[n] * (-s_bn) * math.exp(l_bn + lq2 + e_log)
        t_tr = two_n1 * Pp[n] * (-s_bn) * math.exp(l_bn + lq3 + e_log)
        piece_m = s_bm * math.exp(l_bm + lq1 + e_log)
        piece_n = s_bn * math.exp(l_bn + lq4 + e_log - lu2rr)
        t_tt = (two_n1 / nn1) * (Pp[n] * piece_m - F[n] * piece_n)
        t_ff = (two_n1 / nn1) * (F[n] * piece_m - Pp[n] * piece_n)

        sums[0] += t_rr
        sums[1] += t_rt
        sums[2] += t_tr
        sums[3] += t_tt
        sums[4] += t_ff

        ok = (abs(t_rr) <= rel_tol * abs(sums[0])
              and abs(t_rt) <= rel_tol * abs(sums[1])
              and abs(t_tr) <= rel_tol * abs(sums[2])
              and abs(t_tt) <= rel_tol * abs(sums[3])
              and abs(t_ff) <= rel_tol * abs(sums[4]))
        if ok:
            good += 1
            if good >= n_consec:
                n_used = n
                converged = True
                break
        else:
            good = 0
    # B_n Q_n carries an overall 2/pi after the i^n phases cancel
    for j in range(5):
        sums[j] *= 2.0 / math.pi
    return sums, n_used, converged


@njit(cache=True, nogil=True)
def mie_scaled(n_list, x0, x1, eps, mu):
    """Scaled Mie ratios for the orders in n_list at sphere arguments x0, x1.

    Returns (bm, bn) with B_n^{M,N}(iu) = (-1)^n (pi/2) e^{2 x0} * bm(bn)[j].
    """
    n_top = int(np.max(n_list))
    Li0, Lk0, LiR0, LkR0 = bessel_ik_logs(n_top, x0)
    if x1 == x0:
        Li1, LiR1 = Li0, LiR0
    else:
        Li1, _, LiR1, _ = bessel_ik_logs(n_top, x1)
    leps = math.log(eps)
    lmu = math.log(mu)
    out_m = np.empty(len(n_list))
    out_n = np.empty(len(n_list))
    for j in range(len(n_list)):
        n = n_list[j]
        ta = LiR0[n] + Li1[n]
        tb = LiR1[n] + Li0[n]
        for which in range(2):
            lfac = leps if which == 1 else lmu
            t1 = lfac + ta
            if t1 >= tb:
                sgn = 1.0
                lnum = t1 + math.log1p(-math.exp(tb - t1)) if tb != t1 else -np.inf
            else:
                sgn = -1.0
                lnum = tb + math.log1p(-math.exp(t1 - tb))
            lden = _logadd(lfac + LkR0[n] + Li1[n], LiR1[n] + Lk0[n])
            val = -sgn * math.exp(lnum - lden)
            if which == 1:
                out_n[j] = val
            else:
                out_m[j] = val
    return out_m, out_n
