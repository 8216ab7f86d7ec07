"""Iteration sequences for the weakly coupled system and their divergence thresholds.

The coupled blow-up argument runs an induction on lower bounds of the
weighted traces (U, V):

  * subcritical (first branch of the critical curve positive):
        U(z) >= C_j (R+z)^(-alpha_j) (z-R)^(beta_j),
    with geometric recursions for alpha, beta and a doubly exponential one
    for C_j;
  * critical (first branch exactly zero): logarithmic lower bounds on the
    sliced domains z >= l_j R with l_j = 2 - 2^-(j+1) increasing to 2;
  * cusp (both branches zero): logarithmic bounds on the unsliced domain,
    with weight (R+y)^(-1) on both equations.

Every multiplicative sequence is computed in logarithmic form with mpmath
extended precision (the plain values overflow any fixed-width float by
j ~ 10), storing both the exact recursion and the closed form for
cross-checking, together with the lower-bound constants (Chat/Dhat/Ehat)
and the index from which the bound log X_j >= (pq)^j log(Xhat*eps) is
valid.  Divergence of that bound as j -> infinity is what forces blow-up;
:func:`divergence_threshold` evaluates the bracketed quantity whose excess
over 1 triggers it, reproducing the lifespan rates of
:func:`lifespan_rate_system`.

The frame constants C, K (and the data constants M, N) are not explicit in
the underlying estimates; they default to 1 and are injectable, so every
eps-threshold is reported as a function of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

from .params import (
    CriticalCurveReport,
    SystemParams,
    classify_system,
    lambda_curve,
)

__all__ = [
    "IterationFrame",
    "SubcriticalSequences",
    "CriticalSequences",
    "CuspSequences",
    "SystemLifespanPrediction",
    "DivergenceVerdict",
    "build_iteration_frame",
    "subcritical_sequences",
    "critical_sequences",
    "cusp_sequences",
    "lifespan_rate_system",
    "divergence_threshold",
]

#: Working precision (decimal digits) for the sequence recursions.
SEQUENCE_DPS = 60


@dataclass(frozen=True)
class IterationFrame:
    """Weight exponents of the coupled integral inequalities.

    weight_u is the (R+y)-exponent in the inequality bounding U through V
    (and weight_v the symmetric one); at the cusp exponent pair both equal
    exactly -1.
    """

    n: int
    sigma1: float
    sigma2: float
    p: float
    q: float
    M: float
    C: float
    N: float
    K: float
    weight_u: float
    weight_v: float


def build_iteration_frame(
    n: int,
    sys: SystemParams,
    constants: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0),
) -> IterationFrame:
    """Frame descriptor with constants (M, C, N, K) and both weight exponents."""
    M, C, N, K = constants
    if min(M, C, N, K) <= 0:
        raise ValueError("frame constants (M, C, N, K) must be positive")
    s1, s2, p, q = sys.sigma1, sys.sigma2, sys.p, sys.q
    weight_u = -0.5 * (n - 1) * (p - 1.0) + 0.5 * s1 - 0.5 * s2 * p
    weight_v = -0.5 * (n - 1) * (q - 1.0) + 0.5 * s2 - 0.5 * s1 * q
    return IterationFrame(
        n=n, sigma1=s1, sigma2=s2, p=p, q=q, M=M, C=C, N=N, K=K,
        weight_u=weight_u, weight_v=weight_v,
    )


def _regime_check(n: int, sys: SystemParams, wanted: str, raw: bool) -> bool:
    """Return the regime-mismatch flag; raise unless raw mode accepts it."""
    report = classify_system(n, sys)
    if wanted == "subcritical":
        ok = report.lambda1 > 0.0 and report.lambda1 >= report.lambda2
    elif wanted == "critical":
        ok = report.regime == "critical_branch1"
    else:  # cusp
        ok = report.regime == "cusp"
    if not ok and not raw:
        raise ValueError(
            f"parameters are in regime '{report.regime}', not '{wanted}' "
            "(pass raw=True to build the sequences anyway)"
        )
    return not ok


def _float_list(values: list[mp.mpf]) -> list[float]:
    return [float(v) for v in values]


def _ceil_threshold(value: mp.mpf) -> int:
    """Start index max(0, value), ceiled (the bound treats j as a real cutoff)."""
    return max(0, int(mp.ceil(value)))


@dataclass(frozen=True)
class SubcriticalSequences:
    """Sequences of the subcritical induction, in logarithmic form.

    alphas/betas hold the recursion values, *_closed the closed forms
    A((pq)^j - 1)/(pq-1) and B((pq)^j - 1)/(pq-1); logCs is the exact
    log C_j recursion.  For j >= j0 the bound
    log C_j >= (pq)^j log(Chat*eps) holds.
    """

    pq: float
    A: float
    B: float
    alphas: list[float]
    betas: list[float]
    alphas_closed: list[float]
    betas_closed: list[float]
    logCs: list[float]
    j0: int
    Chat: float
    Ctilde: float
    p: float
    q: float
    eps: float
    lambda1: float
    regime_mismatch: bool


def subcritical_sequences(
    n: int,
    sys: SystemParams,
    M: float,
    eps: float,
    jmax: int,
    C: float = 1.0,
    K: float = 1.0,
    raw: bool = False,
    dps: int = SEQUENCE_DPS,
) -> SubcriticalSequences:
    """Build alpha_j, beta_j, log C_j for j = 0..jmax plus the bound constants."""
    if M <= 0 or C <= 0 or K <= 0 or eps <= 0:
        raise ValueError("M, C, K, eps must be positive")
    mismatch = _regime_check(n, sys, "subcritical", raw)
    lam1 = lambda_curve(n + sys.sigma1, sys.p, sys.q)
    with mp.workdps(dps):
        p, q = mp.mpf(sys.p), mp.mpf(sys.q)
        s1, s2 = mp.mpf(sys.sigma1), mp.mpf(sys.sigma2)
        pq = p * q
        A = (n + s1 - 1) * (pq - 1) / 2 + s2 * p / 2 + s1 / 2
        B = s2 * p / 2 + s1 / 2 + p + 1
        log_ckp = mp.log(C) + p * mp.log(K)

        alphas = [mp.mpf(0)]
        betas = [mp.mpf(0)]
        logcs = [mp.log(mp.mpf(M) * mp.mpf(eps))]
        for _ in range(jmax):
            beta_next = B + pq * betas[-1]
            logcs.append(
                log_ckp
                - p * mp.log(s2 / 2 + 1 + q * betas[-1])
                - mp.log(beta_next)
                + pq * logcs[-1]
            )
            alphas.append(A + pq * alphas[-1])
            betas.append(beta_next)
        alphas_closed = [A * (pq**j - 1) / (pq - 1) for j in range(jmax + 1)]
        betas_closed = [B * (pq**j - 1) / (pq - 1) for j in range(jmax + 1)]

        ctilde = C * mp.mpf(K) ** p * (B / (pq - 1)) ** (-(p + 1))
        chat = M * pq ** (-pq * (p + 1) / (pq - 1) ** 2) * ctilde ** (1 / (pq - 1))
        j0 = _ceil_threshold(mp.log(ctilde) / mp.log(pq ** (p + 1)) - pq / (pq - 1))
        return SubcriticalSequences(
            pq=float(pq),
            A=float(A),
            B=float(B),
            alphas=_float_list(alphas),
            betas=_float_list(betas),
            alphas_closed=_float_list(alphas_closed),
            betas_closed=_float_list(betas_closed),
            logCs=_float_list(logcs),
            j0=j0,
            Chat=float(chat),
            Ctilde=float(ctilde),
            p=sys.p,
            q=sys.q,
            eps=eps,
            lambda1=lam1,
            regime_mismatch=mismatch,
        )


@dataclass(frozen=True)
class CriticalSequences:
    """Slicing sequence l_j, log exponents theta_j, and log D_j."""

    ells: list[float]
    thetas: list[float]
    thetas_closed: list[float]
    logDs: list[float]
    j1: int
    Dhat: float
    Dtilde: float
    p: float
    q: float
    eps: float
    regime_mismatch: bool


def critical_sequences(
    n: int,
    sys: SystemParams,
    M: float,
    eps: float,
    jmax: int,
    C: float = 1.0,
    K: float = 1.0,
    raw: bool = False,
    dps: int = SEQUENCE_DPS,
) -> CriticalSequences:
    """Build l_j, theta_j, log D_j for the single-branch critical induction."""
    if M <= 0 or C <= 0 or K <= 0 or eps <= 0:
        raise ValueError("M, C, K, eps must be positive")
    mismatch = _regime_check(n, sys, "critical", raw)
    with mp.workdps(dps):
        p, q = mp.mpf(sys.p), mp.mpf(sys.q)
        s2 = mp.mpf(sys.sigma2)
        pq = p * q
        log_ckp = mp.log(C) + p * mp.log(K)
        const_exp = (4 + s2 / 2) * p + 1  # exponent of the fixed 2^-() factor

        thetas = [mp.mpf(0)]
        logds = [mp.log(mp.mpf(M) * mp.mpf(eps))]
        for j in range(jmax):
            logds.append(
                log_ckp
                - (j * p + const_exp) * mp.log(2)
                - mp.log(pq * thetas[-1] + 1)
                + pq * logds[-1]
            )
            thetas.append(1 + pq * thetas[-1])
        thetas_closed = [(pq**j - 1) / (pq - 1) for j in range(jmax + 1)]
        ells = [2.0 - 2.0 ** -(j + 1) for j in range(jmax + 1)]

        dtilde = mp.mpf(2) ** (-const_exp) * C * mp.mpf(K) ** p * (pq - 1)
        dhat = M * (2**p * pq) ** (-pq / (pq - 1) ** 2) * dtilde ** (1 / (pq - 1))
        j1 = _ceil_threshold(mp.log(dtilde) / mp.log(2**p * pq) - pq / (pq - 1))
        return CriticalSequences(
            ells=ells,
            thetas=_float_list(thetas),
            thetas_closed=_float_list(thetas_closed),
            logDs=_float_list(logds),
            j1=j1,
            Dhat=float(dhat),
            Dtilde=float(dtilde),
            p=sys.p,
            q=sys.q,
            eps=eps,
            regime_mismatch=mismatch,
        )


@dataclass(frozen=True)
class CuspSequences:
    """Log exponents rho_j and log E_j of the cusp-point induction."""

    rhos: list[float]
    rhos_closed: list[float]
    logEs: list[float]
    j2: int
    Ehat: float
    Etilde: float
    p: float
    q: float
    eps: float
    regime_mismatch: bool


def cusp_sequences(
    n: int,
    sys: SystemParams,
    M: float,
    eps: float,
    jmax: int,
    C: float = 1.0,
    K: float = 1.0,
    raw: bool = False,
    dps: int = SEQUENCE_DPS,
) -> CuspSequences:
    """Build rho_j and log E_j for the double-critical (cusp) induction."""
    if M <= 0 or C <= 0 or K <= 0 or eps <= 0:
        raise ValueError("M, C, K, eps must be positive")
    mismatch = _regime_check(n, sys, "cusp", raw)
    with mp.workdps(dps):
        p, q = mp.mpf(sys.p), mp.mpf(sys.q)
        pq = p * q
        log_ckp = mp.log(C) + p * mp.log(K)

        rhos = [mp.mpf(0)]
        loges = [mp.log(mp.mpf(M) * mp.mpf(eps))]
        for _ in range(jmax):
            loges.append(
                -(p + 1) * mp.log(2)
                + log_ckp
                - p * mp.log(q * rhos[-1] + 1)
                - mp.log(pq * rhos[-1] + p + 1)
                + pq * loges[-1]
            )
            rhos.append(p + 1 + pq * rhos[-1])
        rhos_closed = [(p + 1) * (pq**j - 1) / (pq - 1) for j in range(jmax + 1)]

        etilde = mp.mpf(2) ** (-(p + 1)) * C * mp.mpf(K) ** p * ((p + 1) / (pq - 1)) ** (
            -(p + 1)
        )
        ehat = M * pq ** (-pq * (p + 1) / (pq - 1) ** 2) * etilde ** (1 / (pq - 1))
        j2 = _ceil_threshold(mp.log(etilde) / mp.log(pq ** (p + 1)) - pq / (pq - 1))
        return CuspSequences(
            rhos=_float_list(rhos),
            rhos_closed=_float_list(rhos_closed),
            logEs=_float_list(loges),
            j2=j2,
            Ehat=float(ehat),
            Etilde=float(etilde),
            p=sys.p,
            q=sys.q,
            eps=eps,
            regime_mismatch=mismatch,
        )


@dataclass(frozen=True)
class SystemLifespanPrediction:
    """Lifespan rate for the coupled system, per critical-curve regime.

    regime 'algebraic':   T <~ eps^(-rate) with rate = 1/Omega;
    regime 'exponential': log T <~ eps^(-rate), where rate is pq-1 on a
        single critical branch and (pq-1)/(p+1) resp. (pq-1)/(q+1) at the
        cusp (the branch with the larger shift wins, which is the min);
    regime 'none':        Omega < 0, no prediction.
    """

    regime: str
    rate: float | None
    branch: str
    curve: CriticalCurveReport


def lifespan_rate_system(
    n: int, sys: SystemParams, tol: float = 1e-12
) -> SystemLifespanPrediction:
    """Predicted lifespan scaling of the coupled system."""
    report = classify_system(n, sys, tol=tol)
    p, q = sys.p, sys.q
    pq = p * q
    if report.regime == "subcritical":
        return SystemLifespanPrediction(
            regime="algebraic", rate=1.0 / report.omega, branch="omega_positive",
            curve=report,
        )
    if report.regime in ("critical_branch1", "critical_branch2"):
        return SystemLifespanPrediction(
            regime="exponential", rate=pq - 1.0, branch=report.regime, curve=report
        )
    if report.regime == "cusp":
        rate1 = (pq - 1.0) / (p + 1.0)
        rate2 = (pq - 1.0) / (q + 1.0)
        branch = "cusp_sigma1_ge_sigma2" if sys.sigma1 >= sys.sigma2 else "cusp_sigma2_gt_sigma1"
        return SystemLifespanPrediction(
            regime="exponential", rate=min(rate1, rate2), branch=branch, curve=report
        )
    return SystemLifespanPrediction(regime="none", rate=None, branch="supercritical", curve=report)


@dataclass(frozen=True)
class DivergenceVerdict:
    """Whether the iterated lower bound diverges at a given point.

    ``bracket`` is the quantity whose excess over 1 makes the j -> infinity
    limit blow up; ``threshold`` is the first coordinate (t for the
    subcritical regime, z otherwise) past which that happens, and
    ``log_threshold`` its logarithm (the critical/cusp thresholds are
    exponential in a negative power of eps and overflow floats quickly, so
    the log form is the reliable one for asymptotics).
    """

    regime: str
    bracket: float
    diverges: bool
    threshold: float
    log_threshold: float
    domain_ok: bool


def _exp_or_inf(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def divergence_threshold(
    sequences: SubcriticalSequences | CriticalSequences | CuspSequences,
    z: float,
    R: float,
) -> DivergenceVerdict:
    """Evaluate the divergence bracket of the applicable regime at (z, R)."""
    if R <= 0 or z <= 0:
        raise ValueError("need z > 0 and R > 0")
    eps = sequences.eps
    p, q = sequences.p, sequences.q
    pq = p * q
    if isinstance(sequences, SubcriticalSequences):
        lam = sequences.lambda1
        if lam <= 0:
            raise ValueError(
                "subcritical divergence bracket needs lambda1 > 0 "
                "(raw off-regime sequences carry no threshold)"
            )
        cbar = 2.0 ** (-sequences.B / (pq - 1.0)) * sequences.Chat
        t = z + R
        bracket = cbar * eps * t**lam
        log_threshold = -math.log(cbar * eps) / lam
        return DivergenceVerdict(
            regime="subcritical",
            bracket=bracket,
            diverges=bracket > 1.0,
            threshold=_exp_or_inf(log_threshold),
            log_threshold=log_threshold,
            domain_ok=z >= 3.0 * R,
        )
    if isinstance(sequences, CriticalSequences):
        log_arg = math.log(z / (2.0 * R)) if z > 2.0 * R else 0.0
        bracket = sequences.Dhat * eps * log_arg ** (1.0 / (pq - 1.0))
        log_threshold = math.log(2.0 * R) + (sequences.Dhat * eps) ** (-(pq - 1.0))
        return DivergenceVerdict(
            regime="critical",
            bracket=bracket,
            diverges=bracket > 1.0,
            threshold=_exp_or_inf(log_threshold),
            log_threshold=log_threshold,
            domain_ok=z >= 2.0 * R,
        )
    if isinstance(sequences, CuspSequences):
        log_arg = math.log(z / R) if z > R else 0.0
        bracket = sequences.Ehat * eps * log_arg ** ((p + 1.0) / (pq - 1.0))
        log_threshold = math.log(R) + (sequences.Ehat * eps) ** (-(pq - 1.0) / (p + 1.0))
        return DivergenceVerdict(
            regime="cusp",
            bracket=bracket,
            diverges=bracket > 1.0,
            threshold=_exp_or_inf(log_threshold),
            log_threshold=log_threshold,
            domain_ok=z >= R,
        )
    raise TypeError(f"unrecognized sequence family: {type(sequences).__name__}")
