"""Verification procedures with machine-readable certificates.

Every check recomputes its claim from the lower layers; nothing is cached
as truth.  A verdict passes iff each of its certificate entries is equal.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .calculus import (
    P1T_TEXT,
    P1_TEXT,
    P21T_TEXT,
    P21_TEXT,
    P2T_TEXT,
    P2_TEXT,
    CurvatureModel,
    atoms,
    cocalibration_conditions,
    d,
    decompose,
    divide_by_h,
    expand_poly,
    invariant_basis,
    torsion_report,
    word_name,
)
from .exterior import DIM, Form, FormTable, named, parse_form, render_form, use_table, wedge
from .g2 import (
    STRUCTURE_FORMS,
    Coeffs,
    build_sigma,
    frames,
    hodge_closed_form,
    hodge_gram,
    hodge_oracle,
    invariant_form,
    is_stable,
    metric_data,
    norm_sq,
    block_matrix,
    pairing_matrix,
    star_basis,
)
from .exterior import substitute_coframe, wedge_all
from .scalars import P, Poly, QuadNum, ScaledScalar, Surd, parse_poly, parse_scalar

DEFAULT_SEED = 20110
RENDER_LIMIT = 600


def resolve_seed(seed: Optional[int] = None) -> int:
    env = os.environ.get("GWISTOR_SEED")
    if env is not None and env.strip():
        return int(env)
    return DEFAULT_SEED if seed is None else seed


def _render(value: object) -> str:
    if isinstance(value, Form):
        text = render_form(value)
    elif isinstance(value, (list, tuple)):
        text = "[" + ", ".join(_render(v) for v in value) + "]"
    else:
        text = str(value)
    if len(text) > RENDER_LIMIT:
        digest = hashlib.sha256(text.encode()).hexdigest()[:16]
        text = f"{text[:RENDER_LIMIT]}... <{len(text)} chars, sha256:{digest}>"
    return text


@dataclass(frozen=True)
class Entry:
    claim: str
    lhs: str
    rhs: str
    equal: bool

    def as_dict(self) -> dict:
        return {"claim": self.claim, "lhs": self.lhs, "rhs": self.rhs, "equal": self.equal}


@dataclass
class Verdict:
    name: str
    certificate: list[Entry] = field(default_factory=list)
    elapsed: float = 0.0
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return all(e.equal for e in self.certificate)

    def check(self, claim: str, lhs: object, rhs: object, equal: Optional[bool] = None) -> bool:
        if equal is None:
            equal = bool(lhs == rhs)
        self.certificate.append(Entry(claim, _render(lhs), _render(rhs), bool(equal)))
        return bool(equal)

    def failures(self) -> list[Entry]:
        return [e for e in self.certificate if not e.equal]

    def as_dict(self, timing: bool = False) -> dict:
        out = {
            "name": self.name,
            "passed": self.passed,
            "certificate": [e.as_dict() for e in self.certificate],
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if timing:
            out["elapsed"] = round(self.elapsed, 6)
        return out


def _timed(name: str, fn: Callable[[Verdict], None], seed: Optional[int] = None) -> Verdict:
    v = Verdict(name, seed=seed)
    start = time.perf_counter()
    try:
        fn(v)
    except Exception as exc:  # a crash is a failed verification, never a silent pass
        v.check("completed", f"{type(exc).__name__}: {exc}", "no exception", False)
    v.elapsed = time.perf_counter() - start
    return v


def F(text: str) -> Form:
    return parse_form(text)


# ---------------------------------------------------------------------------
# random stable samples


def stable_samples(n: int, seed: int, need_z: bool = False) -> list[Coeffs]:
    rng = random.Random(seed)
    out: list[Coeffs] = []
    while len(out) < n:
        vals = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(4)]
        vals.append(Fraction(rng.randint(1, 5), rng.randint(1, 2)))
        c = Coeffs(tuple(vals))
        if not is_stable(c).stable:
            continue
        f0, f1, f2, f3 = vals[:4]
        if need_z and f1 * f2 == f0 * f3:
            continue
        out.append(c)
    return out


# ---------------------------------------------------------------------------
# first structure equations


def _bse1(v: Verdict) -> None:
    c = Coeffs.sigma0()
    star = lambda a: hodge_oracle(a, c)  # noqa: E731
    th, dth = named("theta"), named("dtheta")
    al, a1, a2, a3 = (named(n) for n in ("alpha", "alpha1", "alpha2", "alpha3"))
    vol = named("vol")
    dth2, dth3 = wedge(dth, dth), wedge_all(dth, dth, dth)
    v.check("*alpha = theta^alpha3", star(al), wedge(th, a3))
    v.check("theta^alpha3 = vol", wedge(th, a3), vol)
    v.check("*alpha1 = -theta^alpha2", star(a1), -wedge(th, a2))
    v.check("*alpha2 = theta^alpha1", star(a2), wedge(th, a1))
    v.check("*dtheta = 1/2 theta^dtheta^2", star(dth), wedge(th, dth2) * Fraction(1, 2))
    v.check("*dtheta^2 = 2 theta^dtheta", star(dth2), wedge(th, dth) * 2)
    v.check("*dtheta^3 = 6 theta", star(dth3), th * 6)
    v.check("alpha1^alpha2 = 3 alpha3^alpha", wedge(a1, a2), wedge(a3, al) * 3)
    v.check("3 alpha3^alpha = 3 *theta", wedge(a3, al) * 3, star(th) * 3)
    v.check("3 *theta = 1/2 dtheta^3", star(th) * 3, dth3 * Fraction(1, 2))
    zero4, zero5, zero6 = Form(5), Form(6), Form(6)
    v.check("dtheta^alpha_i = 0 (i=1,2,3)",
            [wedge(dth, a) for a in (a1, a2, a3)], [zero4] * 3,
            all(wedge(dth, a).is_zero() for a in (a1, a2, a3)))
    v.check("dtheta^*alpha_i = 0 (i=1,2,3)",
            [wedge(dth, star(a)) for a in (a1, a2, a3)], [Form(6)] * 3,
            all(wedge(dth, star(a)).is_zero() for a in (a1, a2, a3)))
    v.check("alpha3^alpha_i = 0 (i=1,2,3)",
            [wedge(a3, a) for a in (a1, a2, a3)], [zero5] * 3,
            all(wedge(a3, a).is_zero() for a in (a1, a2, a3)))
    v.check("dtheta^alpha = dtheta^*alpha = alpha^alpha1 = alpha^alpha2 = 0",
            [wedge(dth, al), wedge(dth, star(al)), wedge(al, a1), wedge(al, a2)],
            [zero4, zero6, zero5, zero5],
            all(f.is_zero() for f in (wedge(dth, al), wedge(dth, star(al)),
                                      wedge(al, a1), wedge(al, a2))))


def verify_bse1() -> Verdict:
    return _timed("bse1", _bse1)


# ---------------------------------------------------------------------------
# metric and frames


def _matrix_text(M) -> list[list[str]]:
    return [[str(e) for e in row] for row in M]


def _metric(v: Verdict) -> None:
    g = Coeffs.symbolic()
    Pm = pairing_matrix(g)
    M = block_matrix()
    six_f4 = ScaledScalar.coerce(P("f4") * 6)
    mismatches = [(i, j) for i in range(DIM) for j in range(DIM)
                  if Pm[i][j] != six_f4 * M[i][j]]
    v.check("pairing matrix = 6 f4 M (expanded)",
            {f"P[{i}][{j}]": str(Pm[i][j].expand()) for i, j in mismatches},
            {f"P[{i}][{j}]": str((six_f4 * M[i][j]).expand()) for i, j in mismatches},
            not mismatches)
    s0 = Coeffs.sigma0()
    P0 = pairing_matrix(s0)
    ident6 = [[6 if i == j else 0 for j in range(DIM)] for i in range(DIM)]
    v.check("sigma0 pairing = 6 Identity", _matrix_text(P0), ident6,
            all(P0[i][j] == ident6[i][j] for i in range(DIM) for j in range(DIM)))
    md = metric_data(s0)
    v.check("sigma0 metric = Identity", _matrix_text(md.G),
            [[int(i == j) for j in range(DIM)] for i in range(DIM)],
            all(md.G[i][j] == int(i == j) for i in range(DIM) for j in range(DIM)))
    v.check("sigma0 m = 1", md.m, 1)
    h_expanded = ScaledScalar.coerce(P("h")).expand().as_poly()
    quartic = parse_poly("3*f0*f1*f2*f3 - f0*f2^3 - f0^2*f3^2 - f3*f1^3")
    v.check("h = xy - z^2 expands to the quartic", h_expanded, quartic,
            h_expanded.terms == quartic.terms)
    c = Coeffs.of(-1, Fraction(1, 2), 1, 0, 1)
    md = metric_data(c)
    v.check("(-1,1/2,1,0,1): x, y, z, h, m, t", [md.x, md.y, md.z, md.h, md.m, md.t],
            ["1", "5/4", "1/2", "1", "1", "1"],
            [str(s) for s in (md.x, md.y, md.z, md.h, md.m, md.t)]
            == ["1", "5/4", "1/2", "1", "1", "1"])
    Pc = pairing_matrix(c)
    expect_diag = [6, 6, 6, 6, Fraction(15, 2), Fraction(15, 2), Fraction(15, 2)]
    v.check("(-1,1/2,1,0,1): pairing diagonal", [Pc[i][i] for i in range(DIM)], expect_diag,
            all(Pc[i][i] == expect_diag[i] for i in range(DIM)))
    v.check("(-1,1/2,1,0,1): pairing P[i][i+3] = 3", [Pc[i][i + 3] for i in (1, 2, 3)],
            [3, 3, 3], all(Pc[i][i + 3] == 3 for i in (1, 2, 3)))
    v.check("(1,0,1,0,1) unstable with h = -1", is_stable(Coeffs.of(1, 0, 1, 0, 1)).as_dict(),
            {"stable": False, "f4": "1", "x": "1", "h": "-1"})
    # intrinsic metric from the pairing, normalised so that det(g) = m^2
    cases = (("sigma0 scaled by 2", s0.scaled(2)), ("sigma_+", Coeffs.parse(SIGMA_PLUS)),
             ("(-1,1/2,1,0,1)", c), ("(0,1,1,-1,1/3)", Coeffs.of(0, 1, 1, -1, Fraction(1, 3))))
    for label, cz in cases:
        g_int, m_int = intrinsic_metric(cz)
        md = metric_data(cz)
        m_closed = float(md.m.constant_value())
        v.check(f"{label}: m from det(P) = f4 h^(1/3)", f"{m_int:.12g}", f"{m_closed:.12g}",
                abs(m_int - m_closed) < 1e-9)
        G = _float_matrix(md.G)
        gap = max(abs(g_int[i][j] - G[i][j]) for i in range(DIM) for j in range(DIM))
        v.check(f"{label}: intrinsic metric = t M", f"max gap {gap:.3e}", "< 1e-9", gap < 1e-9)
        sigma = build_sigma(cz)
        top = wedge(sigma, hodge_oracle(sigma, cz))
        v.check(f"{label}: sigma ^ *sigma = 7 m VolG", top,
                Form(DIM, {tuple(range(DIM)): md.m * 7}))


def _float_matrix(M) -> list[list[float]]:
    return [[float(e.constant_value()) if e.terms else 0.0 for e in row] for row in M]


def intrinsic_metric(c: Coeffs) -> tuple[list[list[float]], float]:
    """Numeric metric of sigma from the 7-form pairing: P = 6 m g with det g = m^2."""
    import numpy as np

    Pm = np.array(_float_matrix(pairing_matrix(c)))
    m = (np.linalg.det(Pm) / 6 ** 7) ** (1 / 9)
    return (Pm / (6 * m)).tolist(), float(m)


def verify_metric() -> Verdict:
    return _timed("metric", _metric)


def _frames(v: Verdict) -> None:
    g = Coeffs.symbolic()
    fr = frames(g)
    comp = [substitute_coframe(fr.inverse[a], fr.tilde_coframe) for a in range(DIM)]
    v.check("inverse coframe composed with tilde coframe = identity", comp,
            [Form.basis(a) for a in range(DIM)],
            all(comp[a] == Form.basis(a) for a in range(DIM)))
    back = [substitute_coframe(fr.tilde_coframe[a], fr.inverse) for a in range(DIM)]
    v.check("tilde coframe composed with inverse coframe = identity", back,
            [Form.basis(a) for a in range(DIM)],
            all(back[a] == Form.basis(a) for a in range(DIM)))
    top = wedge_all(*fr.tilde_coframe)
    m_vol = Form(DIM, {tuple(range(DIM)): parse_scalar("f4*h^(1/3)")})
    v.check("tilde e^0123456 = f4 h^(1/3) e^0123456", top, m_vol)
    s0 = frames(Coeffs.sigma0())
    v.check("sigma0 tilde coframe = coframe", list(s0.tilde_coframe),
            [Form.basis(a) for a in range(DIM)],
            all(s0.tilde_coframe[a] == Form.basis(a) for a in range(DIM)))


def verify_frames() -> Verdict:
    return _timed("frames", _frames)


# ---------------------------------------------------------------------------
# Sasaki circle


def _circle(v: Verdict) -> None:
    c = Coeffs.sasaki_circle()
    md = metric_data(c)
    ident = [[int(i == j) for j in range(DIM)] for i in range(DIM)]
    v.check("circle: metric = Identity mod f0^2+f1^2=1", _matrix_text(md.G), ident,
            all(md.G[i][j] == ident[i][j] for i in range(DIM) for j in range(DIM)))
    v.check("circle: m = 1", md.m, 1)
    v.check("circle: x, y, z, h", [md.x, md.y, md.z, md.h], [1, 1, 0, 1],
            [md.x, md.y, md.z, md.h] == [1, 1, 0, 1])
    Pm = pairing_matrix(c)
    ident6 = [[6 * int(i == j) for j in range(DIM)] for i in range(DIM)]
    v.check("circle: brute-force pairing = 6 Identity", _matrix_text(Pm), ident6,
            all(Pm[i][j] == ident6[i][j] for i in range(DIM) for j in range(DIM)))
    # circle action on eta = (e1 + i e4)(e2 + i e5)(e3 + i e6)
    re, im = Form.scalar(1), Form(0)
    for i in (1, 2, 3):
        a, b = Form.basis(i), Form.basis(i + 3)
        re, im = wedge(re, a) - wedge(im, b), wedge(re, b) + wedge(im, a)
    v.check("eta real part = alpha3 - alpha1", re, F("alpha3 - alpha1"))
    v.check("eta imaginary part = alpha2 - alpha", im, F("alpha2 - alpha"))
    a, b = ScaledScalar.coerce(P("f0")), ScaledScalar.coerce(P("f1"))
    rotated = im * a + re * b + F("theta^dtheta")
    v.check("Im((f0 + i f1) eta) + theta^dtheta", rotated,
            F("-f0*alpha - f1*alpha1 + f0*alpha2 + f1*alpha3 + theta^dtheta"))
    v.check("family at (1,0) is sigma0", build_sigma(Coeffs.of(-1, 0, 1, 0, 1)), named("sigma0"))
    v.check("family at (0,1)", build_sigma(Coeffs.of(0, -1, 0, 1, 1)),
            F("-alpha1 + alpha3 + theta^dtheta"))
    v.check("(sqrt2/2, sqrt2/2) lies on the circle",
            (P("f0") ** 2 + P("f1") ** 2).evaluate(
                {"f0": QuadNum.sqrt(2) / 2, "f1": QuadNum.sqrt(2) / 2}, QuadNum()), QuadNum(1))


def verify_sasaki_circle() -> Verdict:
    return _timed("circle", _circle)


# ---------------------------------------------------------------------------
# Hodge theorem


def _hodge(v: Verdict, seed: int) -> None:
    g = Coeffs.symbolic()
    for name in STRUCTURE_FORMS:
        v.check(f"closed form = oracle: *{name}", hodge_closed_form(name),
                hodge_oracle(invariant_form(name), g))
    v.check("closed form *alpha1 at sigma0 = -theta^alpha2",
            hodge_closed_form("alpha1", Coeffs.sigma0()), F("-theta^alpha2"))
    samples = stable_samples(5, seed, need_z=True)
    for n, c in enumerate(samples):
        bad = []
        for p in range(DIM + 1):
            for idx in itertools.combinations(range(DIM), p):
                e = Form(p, {idx: 1})
                if hodge_oracle(hodge_oracle(e, c), c) != e:
                    bad.append(idx)
        v.check(f"** = id on all 128 basis forms, sample {n} {c.render()}", bad, [], not bad)
    c0 = samples[0]
    for s in (8, 27):
        cs = c0.scaled(s)
        root = Surd.coerce(s) ** Fraction(1, 3)
        bad = [idx for idx in itertools.combinations(range(DIM), 3)
               if star_basis(idx, cs) != star_basis(idx, c0) * root]
        v.check(f"*_(s sigma) = s^(1/3) *_sigma on 3-forms, s={s}", bad, [], not bad)
    # second oracle: Gram determinants
    c1 = samples[1]
    for name in STRUCTURE_FORMS:
        a = invariant_form(name)
        v.check(f"tilde-frame star = Gram star: *{name} at {c1.render()}",
                hodge_oracle(a, c1), hodge_gram(a, c1))


def verify_hodge_theorem(seed: Optional[int] = None) -> Verdict:
    seed = resolve_seed(seed)
    return _timed("hodge", lambda v: _hodge(v, seed), seed)


# ---------------------------------------------------------------------------
# d sigma never vanishes, curvature atoms, independence


def _nonvanishing(v: Verdict) -> None:
    g = Coeffs.symbolic()
    ds = d(build_sigma(g), CurvatureModel.generic()).form
    lhs = wedge_all(named("theta"), named("dtheta"), ds)
    v.check("theta^dtheta^dsigma = 6 f4 VolG", lhs, named("VolG") * P("f4") * 6)
    v.check("d vol = 0", d(named("vol")).form, Form(5))
    for text in ("alpha3", "theta^alpha3", "theta^dtheta", "dtheta^dtheta", "dtheta"):
        first = d(F(text)).form
        v.check(f"d d {text} = 0", d(first).form, Form(first.degree + 1))


def verify_nonvanishing() -> Verdict:
    return _timed("nonvanishing", _nonvanishing)


def _curvature(v: Verdict) -> None:
    gen = atoms(CurvatureModel.generic())
    v.check("theta^Ralpha1 = -rho^vol", wedge(named("theta"), gen.Ralpha1),
            -wedge(gen.rho, named("vol")))
    const = atoms(CurvatureModel.constant())
    k = P("k")
    v.check("constant curvature: Ralpha = -k theta^alpha1", const.Ralpha,
            F("-k*theta^alpha1"))
    v.check("constant curvature: Ralpha1 = -2k theta^alpha2", const.Ralpha1,
            F("-2*k*theta^alpha2"))
    v.check("constant curvature: rbar = 3k", const.rbar, k * 3)
    v.check("constant curvature: rho = 0", const.rho, Form(1))
    flat = atoms(CurvatureModel.flat())
    v.check("flat: all atoms vanish", [flat.Ralpha, flat.Ralpha1, flat.rbar, flat.rho],
            [Form(4), Form(4), 0, Form(1)],
            flat.Ralpha.is_zero() and flat.Ralpha1.is_zero() and flat.rbar.is_zero()
            and flat.rho.is_zero())
    # constant curvature substituted into the generic atoms symbol by symbol
    subs = {}
    from .scalars.symbols import RIEMANN_INDICES, riemann_name

    model = CurvatureModel.constant()
    for idx in RIEMANN_INDICES:
        subs[riemann_name(*idx)] = model.R(*idx)
    gen_sub = gen.Ralpha.map_coefficients(lambda s: s.subs(subs))
    v.check("generic Ralpha specialised = constant Ralpha", gen_sub, const.Ralpha)


def verify_curvature() -> Verdict:
    return _timed("curvature", _curvature)


def _independence(v: Verdict) -> None:
    basis = invariant_basis(3)
    names = [word_name(w) for w in basis.words]
    v.check("rank of {alpha, alpha1, alpha2, alpha3, theta^dtheta}", len(basis.words), 5)
    v.check("independent words", sorted(names),
            ["alpha", "alpha1", "alpha2", "alpha3", "theta^dtheta"])


def verify_independence() -> Verdict:
    return _timed("independence", _independence)


# ---------------------------------------------------------------------------
# W3 and norm on the Sasaki circle


def _roots_exact(p: Poly, candidates: Iterable[Fraction]) -> Optional[list[Fraction]]:
    """Root set of a univariate polynomial in k when it splits over the candidates."""
    k = P("k")
    q = p
    roots = []
    for r in candidates:
        while not q.is_zero() and q.subs({"k": r}).is_zero():
            q = q.exact_divide(k - r)
            roots.append(r)
    if not q.is_constant() or q.is_zero():
        return None
    return sorted(set(roots))


def _w3norm(v: Verdict) -> None:
    c = Coeffs.sasaki_circle()
    model = CurvatureModel.constant()
    sigma = build_sigma(c)
    ds = d(sigma, model).form.map_coefficients(lambda s: s.map_bodies(c.spec.reduce))
    expected = F("theta^(-3*f1*alpha + f0*(k+2)*alpha1 + f1*(2*k+1)*alpha2 - 3*f0*k*alpha3)"
                 " + dtheta^dtheta")
    v.check("d sigma on the circle", ds, expected)
    top = tuple(range(DIM))
    lam = wedge(ds, sigma)[top].map_bodies(c.spec.reduce).compact()
    v.check("d sigma ^ sigma = 6(2+k) VolG mod circle", lam, parse_scalar("6*(2+k)"))
    nrm = norm_sq(ds, c)
    v.check("|d sigma|^2 = 12(k^2+k+2) mod circle", nrm, parse_scalar("12*(k^2+k+2)"))
    star = hodge_oracle(sigma, c)
    dstar = d(star, model).form.map_coefficients(lambda s: s.map_bodies(c.spec.reduce))
    v.check("d*sigma = 0 at constant curvature", dstar, Form(5))
    lam_poly = lam.as_poly()
    cands = [Fraction(n) for n in range(-4, 5)]
    v.check("pure W3 roots", _roots_exact(lam_poly, cands), [-2])
    v.check("norm 48 roots", _roots_exact(nrm.as_poly() - 48, cands), [-2, 1])
    for kval, want in ((-2, 0), (1, 48), (0, 24)):
        got = nrm.as_poly().subs({"k": kval}) if kval != -2 else lam_poly.subs({"k": kval})
        label = "d sigma ^ sigma at k=-2" if kval == -2 else f"|d sigma|^2 at k={kval}"
        v.check(label, got, want)
    # an independent numeric point of the family: (f0, f1) = (3/5, 4/5), k = -2
    pt = Coeffs.of(Fraction(-3, 5), Fraction(-4, 5), Fraction(3, 5), Fraction(4, 5), 1)
    rep = torsion_report(pt, CurvatureModel.constant(-2))
    v.check("report at (3/5, 4/5), k=-2: pure W3", [rep.w3_scalar, rep.pure_w3], ["0", True],
            rep.w3_scalar == "0" and rep.pure_w3 is True)


def verify_w3_and_norm() -> Verdict:
    return _timed("w3norm", _w3norm)


# ---------------------------------------------------------------------------
# cocalibration


def _cocalib(v: Verdict, seed: int) -> None:
    co = cocalibration_conditions()
    v.check("p1 (compact) from d*sigma", co.p1, parse_poly(P1_TEXT))
    v.check("p2 (compact) from d*sigma", co.p2, parse_poly(P2_TEXT))
    e1, e2 = expand_poly(co.p1), expand_poly(co.p2)
    t1, t2 = expand_poly(parse_poly(P1T_TEXT)), expand_poly(parse_poly(P2T_TEXT))
    v.check("expand(p1) = expanded p1 display", e1, t1, e1.terms == t1.terms)
    x2 = expand_poly(P("x") ** 2)
    v.check("expand(p1) = -x^2 * expanded p1 display", e1, -(x2 * t1), e1.terms == (-(x2 * t1)).terms)
    v.check("expand(p2) = expanded p2 display", e2, t2, e2.terms == t2.terms)
    quotient = divide_by_h(P("z") * co.p1 + co.p2)
    v.check("h divides z p1 + p2", quotient is not None, True)
    target = expand_poly(parse_poly(P21T_TEXT))
    sign = "+" if quotient == target else ("-" if quotient == -target else "none")
    v.check("quotient = +/- (f1^3 - 2 f0 f1 f2 + f0^2 f3) x^3 (sign recorded)",
            f"{sign}1 * target", "+1 * target or -1 * target", sign != "none")
    v.check("quotient = compact form of the same polynomial", quotient,
            expand_poly(parse_poly(P21_TEXT)))
    # no common zero: circle slice and random stable samples
    circle = Coeffs.sasaki_circle().spec
    s = circle.reduce(circle.poly(co.p1) ** 2 + circle.poly(co.p2) ** 2)
    v.check("p1^2 + p2^2 on the circle slice", s, 1)
    samples = stable_samples(100, seed)
    common = []
    for c in samples:
        vals = {f"f{i}": c.f[i] for i in range(5)}
        if e1.evaluate(vals) == 0 and e2.evaluate(vals) == 0:
            common.append(c.render())
    v.check("no common zero of (p1, p2) on 100 stable samples", common, [], not common)
    # verdict logic: p2 = 0 -> Einstein suffices, else constant curvature is needed
    wrong = []
    for c in samples[:20] + [Coeffs.sigma0(), Coeffs.of(0, 1, 0, -1, 1)]:
        rep = torsion_report(c, CurvatureModel.generic())
        vals = {f"f{i}": c.f[i] for i in range(5)}
        want = "einstein" if e2.evaluate(vals) == 0 else "constant_sectional_curvature"
        if rep.cocalibration_condition != want:
            wrong.append((c.render(), rep.cocalibration_condition, want))
    v.check("cocalibration verdict mirrors the p2 case split", wrong, [], not wrong)
    rep0 = torsion_report(Coeffs.sigma0(), CurvatureModel.generic())
    v.check("sigma0: cocalibrated iff Einstein", rep0.cocalibration_condition, "einstein")
    repf = torsion_report(Coeffs.of(0, 1, 0, -1, 1), CurvatureModel.generic())
    v.check("f0 = 0 sample needs constant curvature", repf.cocalibration_condition,
            "constant_sectional_curvature")
    c = Coeffs.of(-1, Fraction(1, 2), 1, 0, 1)
    rep = torsion_report(c, CurvatureModel.generic())
    vals = {f"f{i}": c.f[i] for i in range(5)}
    v.check("p2 at (-1,1/2,1,0): report route = expanded display route", rep.p2,
            str(t2.evaluate(vals)))
    # z = 0 family: d*sigma = f3 f4 t^(1/2) h^(3/2) x^(-3) theta^Ralpha
    dz = co.derivative.form.map_coefficients(lambda s: s.subs({"z": 0}))
    gen = atoms(CurvatureModel.generic())
    claimed = wedge(named("theta"), gen.Ralpha) * parse_scalar("f3*f4*t^(1/2)*h^(3/2)*x^(-3)")
    v.check("z = 0: d*sigma = f3 f4 t^(1/2) h^(3/2) x^(-3) theta^Ralpha", dz, claimed)
    einstein_part = wedge(named("theta"), gen.Ralpha1) * parse_scalar(
        "-f2*f4*t^(1/2)*h^(1/2)*x^(-1)")
    v.check("z = 0: remainder is the theta^Ralpha1 term (Einstein part)", dz - claimed,
            einstein_part)


def verify_cocalibration(seed: Optional[int] = None) -> Verdict:
    seed = resolve_seed(seed)
    return _timed("cocalib", lambda v: _cocalib(v, seed), seed)


# ---------------------------------------------------------------------------
# nearly parallel

SIGMA_PLUS = "-sqrt(2)/2,-sqrt(2)/2,sqrt(2)/2,sqrt(2)/2,sqrt(3/2)"
SIGMA_MINUS = "sqrt(2)/2,sqrt(2)/2,-sqrt(2)/2,-sqrt(2)/2,sqrt(3/2)"


def nearly_parallel_system() -> list[tuple[str, Poly]]:
    """Component equations of d sigma = c * sigma on the z = 0 unit-circle family."""
    c = Coeffs.sasaki_circle(P("f4"))
    model = CurvatureModel.constant()
    sigma = build_sigma(c)
    ds = d(sigma, model).form
    star = hodge_oracle(sigma, c)
    residual = ds - star * P("c")
    coeffs = decompose(residual.simplify())
    eqs = []
    for w, s in sorted(coeffs.items(), key=lambda kv: word_name(kv[0])):
        s = s.map_bodies(c.spec.reduce).compact()
        # clear the f4 denominators
        pref, body = s.pref, s.body
        if pref.f4 < 0:
            body = body * P("f4") ** int(-pref.f4)
        eqs.append((word_name(w), body))
    return eqs


DISPLAYED_SYSTEM = ("c - 2*f4", "f0*f1 - k*f0^2", "2*f0*f1*k + f0*f1 - 3*f1^2",
                "3*f1 - 2*f0*f4^2", "2*f0 + k*f0 - 2*f0*f4^2")


def _np_values(text: str) -> dict:
    c = Coeffs.parse(text)
    return {f"f{i}": c.f[i] for i in range(5)}


def sweep_nearly_parallel(step: float = 1e-2, tol: float = 1e-8) -> dict:
    """Grid search over (angle, k, f4) followed by local least-squares refinement."""
    import numpy as np
    from scipy.optimize import least_squares

    eqs = [p for _, p in nearly_parallel_system()]

    def residuals(x):
        phi, k, f4, c = x
        vals = {"f0": math.cos(phi), "f1": math.sin(phi), "k": k, "f4": f4, "c": c}
        return [float(p.evaluate_float(vals)) for p in eqs]

    ks = np.arange(-4.0, 4.0 + step / 2, step)
    f4s = np.arange(step, 4.0 + step / 2, step)
    K, F4 = np.meshgrid(ks, f4s, indexing="ij")
    starts = []
    for phi in np.arange(0.0, 2 * math.pi, step):
        vals = {"f0": math.cos(phi), "f1": math.sin(phi), "k": K, "f4": F4}
        # each equation is affine in c: e = a + b c; eliminate c by least squares
        A = [np.broadcast_to(p.subs({"c": 0}).evaluate_float(vals), K.shape) for p in eqs]
        B = [np.broadcast_to((p - p.subs({"c": 0})).subs({"c": 1}).evaluate_float(vals),
                             K.shape) for p in eqs]
        num = sum(a * b for a, b in zip(A, B))
        den = sum(b * b for b in B)
        cbest = -num / den
        R = np.sqrt(sum((a + b * cbest) ** 2 for a, b in zip(A, B)))
        i, j = np.unravel_index(np.argmin(R), R.shape)
        if R[i, j] < 0.2:
            starts.append((phi, K[i, j], F4[i, j], cbest[i, j]))
    solutions = []
    for x0 in starts:
        fit = least_squares(residuals, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        res = float(np.max(np.abs(fit.fun)))
        if res < tol and fit.x[2] > 0:
            phi = fit.x[0] % (2 * math.pi)
            solutions.append((phi, fit.x[1], fit.x[2], fit.x[3], res))
    known = [(math.pi / 4, 1.0, math.sqrt(1.5)), (5 * math.pi / 4, 1.0, math.sqrt(1.5))]

    def near_known(sol):
        return any(abs((sol[0] - p[0] + math.pi) % (2 * math.pi) - math.pi) < 1e-6
                   and abs(sol[1] - p[1]) < 1e-6 and abs(sol[2] - p[2]) < 1e-6 for p in known)

    off = [s for s in solutions if not near_known(s)]
    return {"starts": len(starts), "solutions": solutions, "off_known": off}


def _np(v: Verdict) -> None:
    k1 = CurvatureModel.constant(1)
    root6 = Surd.coerce(6) ** Fraction(1, 2)
    for label, text in (("sigma_+", SIGMA_PLUS), ("sigma_-", SIGMA_MINUS)):
        c = Coeffs.parse(text)
        sigma = build_sigma(c)
        residual = d(sigma, k1).form - hodge_oracle(sigma, c) * root6
        v.check(f"{label}: d sigma - sqrt6 *sigma = 0 in Q(sqrt2, sqrt3)", residual.simplify(),
                Form(4))
        v.check(f"{label} is the displayed form", sigma,
                F(("" if label == "sigma_+" else "-") + "sqrt(2)/2*(alpha2 - alpha + alpha3 - alpha1)"
                  " + sqrt(3/2)*theta^dtheta"))
    system = nearly_parallel_system()
    v.check("regenerated system has one equation per invariant word",
            [f"{n}: {p}" for n, p in system], "5 equations", len(system) == 5)
    for label, text in (("sigma_+", SIGMA_PLUS), ("sigma_-", SIGMA_MINUS)):
        raw = _np_values(text)
        # the family writes sigma as (-f0, -f1, f0, f1, f4)
        fam = {"f0": -Surd.coerce(raw["f0"]), "f1": -Surd.coerce(raw["f1"]),
               "f4": Surd.coerce(raw["f4"]), "k": 1, "c": root6}
        regen = [p.evaluate(fam, Surd.coerce(0)) for _, p in system]
        v.check(f"{label} solves the regenerated system", regen, [0] * len(regen),
                all(Surd.coerce(r).is_zero() for r in regen))
        shown_vals = [parse_poly(e).evaluate(fam, Surd.coerce(0)) for e in DISPLAYED_SYSTEM]
        v.check(f"{label} solves the displayed system", shown_vals, [0] * 5,
                all(Surd.coerce(r).is_zero() for r in shown_vals))
    qv = {"f0": QuadNum.sqrt(2) / 2, "f1": QuadNum.sqrt(2) / 2, "f4": QuadNum.sqrt(6) / 2,
          "k": QuadNum(1), "c": QuadNum.sqrt(6)}
    v.check("displayed system at (sqrt2/2, sqrt2/2, sqrt6/2, 1, sqrt6)",
            [parse_poly(e).evaluate(qv, QuadNum()) for e in DISPLAYED_SYSTEM], [QuadNum()] * 5)
    # an exact point of the circle away from sigma_+-: (f0, f1) = (1, 0), i.e. sigma0 rescaled
    w = Coeffs.parse("-1,0,1,0,sqrt(3/2)")
    sw = build_sigma(w)
    v.check("exact witness off the known pair sigma_+-: (-1,0,1,0,sqrt(3/2)) is nearly parallel at k=1",
            (d(sw, k1).form - hodge_oracle(sw, w) * root6).simplify(), Form(4))
    wit = {"f0": Surd.coerce(1), "f1": Surd.coerce(0), "f4": Surd.coerce(w.f[4]), "k": 1,
           "c": root6}
    shown = [parse_poly(e).evaluate(wit, Surd.coerce(0)) for e in DISPLAYED_SYSTEM]
    v.check("displayed system vanishes at the witness like the regenerated one", shown,
            [0] * 5, all(Surd.coerce(r).is_zero() for r in shown))
    sweep = sweep_nearly_parallel()
    off = sweep["off_known"]
    sample = [f"angle={s[0]:.6f} k={s[1]:.9f} f4={s[2]:.9f} c={s[3]:.9f}" for s in off[:3]]
    v.check("sweep finds no solutions off the known pair sigma_+-",
            f"{len(off)} outside sigma_+- of {len(sweep['solutions'])} refined solutions; e.g. {sample}",
            "0 unknown solutions", not off)
    # scaling line at s = 8
    c = Coeffs.parse(SIGMA_PLUS)
    s = 8
    cs = c.scaled(s)
    lhs = d(build_sigma(cs), k1).form
    rhs = hodge_oracle(build_sigma(cs), cs) * (root6 * (Surd.coerce(s) ** Fraction(-1, 3)))
    diff = (lhs - rhs).simplify()
    worst = max((abs(float(x.constant_value())) for x in diff.terms.values()), default=0.0)
    v.check("scaling line: d(s sigma) = sqrt6 s^(-1/3) *_(s sigma)(s sigma), s=8, |diff|",
            f"{worst:.3e}", "< 1e-12", worst < 1e-12)


def verify_nearly_parallel() -> Verdict:
    return _timed("np", _np)


# ---------------------------------------------------------------------------
# mutation suite

MUTATIONS: tuple[tuple[str, int], ...] = (
    ("theta", 0), ("dtheta", 0), ("dtheta", 1), ("dtheta", 2), ("alpha", 0),
    ("alpha1", 0), ("alpha1", 1), ("alpha2", 0), ("alpha2", 2), ("alpha3", 0),
)

MUTATION_PROBES: tuple[tuple[str, Callable[[], Verdict]], ...] = (
    ("bse1", verify_bse1),
    ("circle", verify_sasaki_circle),
    ("nonvanishing", verify_nonvanishing),
    ("curvature", verify_curvature),
)


def run_mutations() -> list[dict]:
    baseline = {name: fn().passed for name, fn in MUTATION_PROBES}
    out = []
    for name, term in MUTATIONS:
        table = FormTable().flip(name, term)
        with use_table(table):
            broken = []
            for probe, fn in MUTATION_PROBES:
                verdict = fn()
                if baseline[probe] and not verdict.passed:
                    broken.append(f"{probe}: {verdict.failures()[0].claim}")
        out.append({"mutation": f"{name}[{term}]", "broken": broken})
    return out


def _mutation(v: Verdict) -> None:
    for row in run_mutations():
        v.check(f"mutation {row['mutation']} is detected", row["broken"] or "undetected",
                "at least one failing verdict", bool(row["broken"]))


def verify_mutations() -> Verdict:
    return _timed("mutation", _mutation)


# ---------------------------------------------------------------------------

SUITES: dict[str, tuple[str, ...]] = {
    "bse1": ("bse1",),
    "circle": ("circle",),
    "hodge": ("hodge",),
    "w3norm": ("w3norm",),
    "cocalib": ("cocalib",),
    "np": ("np",),
    "metric": ("metric",),
    "frames": ("frames",),
    "nonvanishing": ("nonvanishing",),
    "curvature": ("curvature",),
    "independence": ("independence",),
    "mutation": ("mutation",),
}
ORDER = ("bse1", "metric", "frames", "circle", "hodge", "nonvanishing", "curvature",
         "independence", "w3norm", "cocalib", "np", "mutation")
SUITES["all"] = ORDER


def run_named(name: str, seed: Optional[int] = None) -> Verdict:
    table = {
        "bse1": verify_bse1,
        "metric": verify_metric,
        "frames": verify_frames,
        "circle": verify_sasaki_circle,
        "hodge": lambda: verify_hodge_theorem(seed),
        "nonvanishing": verify_nonvanishing,
        "curvature": verify_curvature,
        "independence": verify_independence,
        "w3norm": verify_w3_and_norm,
        "cocalib": lambda: verify_cocalibration(seed),
        "np": verify_nearly_parallel,
        "mutation": verify_mutations,
    }
    return table[name]()


def verify_suite(suite: str = "all", seed: Optional[int] = None) -> list[Verdict]:
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}")
    return [run_named(n, seed) for n in SUITES[suite]]


def verify_all(seed: Optional[int] = None) -> list[Verdict]:
    return verify_suite("all", seed)


def summary_table(verdicts: list[Verdict]) -> str:
    width = max((len(v.name) for v in verdicts), default=4)
    lines = [f"{'suite'.ljust(width)}  result  entries"]
    for v in verdicts:
        status = "PASS" if v.passed else "FAIL"
        ok = sum(e.equal for e in v.certificate)
        lines.append(f"{v.name.ljust(width)}  {status}    {ok}/{len(v.certificate)}")
        for e in v.failures():
            lines.append(f"{' ' * width}    failed: {e.claim}")
    return "\n".join(lines)


__all__ = [
    "DEFAULT_SEED", "Entry", "MUTATIONS", "ORDER", "SUITES", "Verdict", "nearly_parallel_system",
    "resolve_seed", "run_mutations", "run_named", "stable_samples", "summary_table",
    "sweep_nearly_parallel", "verify_all", "verify_bse1", "verify_cocalibration",
    "verify_curvature", "verify_frames", "verify_hodge_theorem", "verify_independence",
    "verify_metric", "verify_mutations", "verify_nearly_parallel", "verify_nonvanishing",
    "verify_sasaki_circle", "verify_suite", "verify_w3_and_norm",
]

