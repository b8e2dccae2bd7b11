//! Period integrals of cusp forms and the resulting 1-cocycles on
//! congruence subgroups, valued in the dual of `V(k)` (modelled by `P_F`).

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::linalg::rank;
use crate::exact::{binomial, rat_int};
use crate::modular_forms::{atkin_lehner_sign, Certified, NumericForm, QExpansion};
use crate::numeric::linalg::least_squares;
use crate::numeric::{recognize_rational, Complex, Real};
use crate::poly_rep::{dual_to_poly, subst_matrix, GroupElement, HomPoly};
use crate::report::CheckRecord;

/// Integer 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntMat {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl IntMat {
    pub const IDENTITY: IntMat = IntMat::new(1, 0, 0, 1);
    pub const S: IntMat = IntMat::new(0, -1, 1, 0);
    pub const T: IntMat = IntMat::new(1, 1, 0, 1);

    pub const fn new(a: i128, b: i128, c: i128, d: i128) -> Self {
        IntMat { a, b, c, d }
    }

    pub fn det(&self) -> i128 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &IntMat) -> IntMat {
        let m = |x: i128, y: i128, z: i128, w: i128| {
            x.checked_mul(y).and_then(|p| z.checked_mul(w).and_then(|q| p.checked_add(q))).expect("matrix entry overflow")
        };
        IntMat::new(
            m(self.a, o.a, self.b, o.c),
            m(self.a, o.b, self.b, o.d),
            m(self.c, o.a, self.d, o.c),
            m(self.c, o.b, self.d, o.d),
        )
    }

    /// `[[d, -b], [-c, a]]`.
    pub fn adj(&self) -> IntMat {
        IntMat::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn inverse(&self) -> Result<IntMat> {
        match self.det() {
            1 => Ok(self.adj()),
            -1 => Ok(self.adj().neg()),
            _ => Err(Error::NotInGroup(self.entries_i64())),
        }
    }

    pub fn neg(&self) -> IntMat {
        IntMat::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// `ω g ω` for `ω = diag(1, -1)`.
    pub fn omega_conj(&self) -> IntMat {
        IntMat::new(self.a, -self.b, -self.c, self.d)
    }

    pub fn pow(&self, e: i32) -> Result<IntMat> {
        let base = if e < 0 { self.inverse()? } else { *self };
        Ok((0..e.unsigned_abs()).fold(IntMat::IDENTITY, |acc, _| acc.mul(&base)))
    }

    pub fn max_entry(&self) -> u128 {
        [self.a, self.b, self.c, self.d].iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn entries_i64(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d].map(|x| x.clamp(i64::MIN as i128, i64::MAX as i128) as i64)
    }

    pub fn in_gamma0(&self, level: u64) -> bool {
        self.det() == 1 && self.c % level as i128 == 0
    }

    pub fn is_pm_identity(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d && self.a.abs() == 1
    }

    pub fn to_group_element(&self) -> GroupElement {
        let r = |x: i128| BigRational::from_integer(BigInt::from(x));
        GroupElement::new(r(self.a), r(self.b), r(self.c), r(self.d)).expect("nonsingular integer matrix")
    }

    /// Möbius action on the upper half-plane.
    pub fn act<R: Real>(&self, z: &Complex<R>) -> Complex<R> {
        let p = z.prec();
        let e = |x: i128| R::from_bigint(&BigInt::from(x), p);
        let num = z.scale(&e(self.a)) + Complex::from_real(e(self.b));
        let den = z.scale(&e(self.c)) + Complex::from_real(e(self.d));
        num / den
    }

    /// Parse `"a,b,c,d"`.
    pub fn parse(s: &str) -> Result<IntMat> {
        let v: Vec<i128> = s
            .split(',')
            .map(|t| t.trim().parse::<i128>().map_err(|_| Error::Parse(format!("bad matrix entry {t:?}"))))
            .collect::<Result<_>>()?;
        if v.len() != 4 {
            return Err(Error::Parse(format!("expected 4 entries, got {}", v.len())));
        }
        Ok(IntMat::new(v[0], v[1], v[2], v[3]))
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Plain substitution `P(x, y) ↦ P(ax + cy, bx + dy)`.
pub fn act_int<R: Real>(g: &IntMat, p: &HomPoly<Complex<R>>) -> HomPoly<Complex<R>> {
    p.substitute(&g.to_group_element())
}

/// Generators of a congruence subgroup `Γ0(N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    pub level: u64,
    pub names: Vec<String>,
    pub mats: Vec<IntMat>,
}

impl GeneratorSet {
    pub fn level1() -> Self {
        GeneratorSet { level: 1, names: vec!["S".into(), "T".into()], mats: vec![IntMat::S, IntMat::T] }
    }

    /// Bundled generators of `Γ0(11)`, closed under `ω`-conjugation up to sign.
    pub fn gamma0_11() -> Self {
        let v: Value = serde_json::from_str(include_str!("../data/gamma0_11.json")).expect("bundled generator file");
        GeneratorSet::from_json(11, &v).expect("bundled generators lie in Γ0(11)")
    }

    /// Built-in generator set for a form's level.
    pub fn for_level(level: u64) -> Result<Self> {
        match level {
            1 => Ok(GeneratorSet::level1()),
            11 => Ok(GeneratorSet::gamma0_11()),
            _ => Err(Error::Parse(format!("no bundled generators for level {level}"))),
        }
    }

    /// A JSON array of matrices `[[a, b], [c, d]]`.
    pub fn from_json(level: u64, v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("generator file must be an array".into()))?;
        let mut mats = Vec::with_capacity(arr.len());
        for m in arr {
            let e = |i: usize, j: usize| -> Result<i128> {
                m.get(i)
                    .and_then(|r| r.get(j))
                    .and_then(Value::as_i64)
                    .map(i128::from)
                    .ok_or_else(|| Error::Parse(format!("bad matrix {m}")))
            };
            let g = IntMat::new(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?);
            if !g.in_gamma0(level) {
                return Err(Error::NotInGroup(g.entries_i64()));
            }
            mats.push(g);
        }
        let names = (0..mats.len()).map(|i| format!("g{i}")).collect();
        Ok(GeneratorSet { level, names, mats })
    }

    pub fn load(level: u64, path: &Path) -> Result<Self> {
        GeneratorSet::from_json(level, &serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }
    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    /// Index and exponent of a generator equal to `g` up to sign.
    pub fn find(&self, g: &IntMat) -> Option<(usize, i32)> {
        for (i, h) in self.mats.iter().enumerate() {
            if h == g || h.neg() == *g {
                return Some((i, 1));
            }
            let hi = h.adj();
            if hi == *g || hi.neg() == *g {
                return Some((i, -1));
            }
        }
        None
    }
}

/// A word in the generators; letters are `(index, ±1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupWord(pub Vec<(usize, i32)>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }
    pub fn letter(i: usize, e: i32) -> Self {
        GroupWord(vec![(i, e)])
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, o: &GroupWord) -> GroupWord {
        GroupWord(self.0.iter().chain(o.0.iter()).copied().collect())
    }

    pub fn eval(&self, gens: &GeneratorSet) -> IntMat {
        self.0.iter().fold(IntMat::IDENTITY, |acc, &(i, e)| {
            let g = if e > 0 { gens.mats[i] } else { gens.mats[i].adj() };
            acc.mul(&g)
        })
    }

    /// Uniform random word of length `1..=max_len`.
    pub fn random<G: Rng>(rng: &mut G, max_len: usize, gens: &GeneratorSet) -> GroupWord {
        let len = rng.gen_range(1..=max_len);
        GroupWord((0..len).map(|_| (rng.gen_range(0..gens.len()), if rng.gen_bool(0.5) { 1 } else { -1 })).collect())
    }

    /// Parse space-separated letters such as `S T^-1 g3`.
    pub fn parse(s: &str, gens: &GeneratorSet) -> Result<GroupWord> {
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            let (name, e) = match tok.split_once('^') {
                Some((n, e)) => (n, e.parse::<i32>().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?),
                None => (tok, 1),
            };
            let i = gens
                .names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))?;
            let sign = if e < 0 { -1 } else { 1 };
            out.extend(std::iter::repeat_n((i, sign), e.unsigned_abs() as usize));
        }
        Ok(GroupWord(out))
    }

    pub fn display(&self, gens: &GeneratorSet) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&(i, e)| if e > 0 { gens.names[i].clone() } else { format!("{}^-1", gens.names[i]) })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Base point of a cocycle.
#[derive(Clone, Debug, PartialEq)]
pub enum BasePoint {
    Infinity,
    Interior { re: BigRational, im: BigRational },
}

impl BasePoint {
    pub fn i() -> Self {
        BasePoint::Interior { re: BigRational::zero(), im: BigRational::one() }
    }
    pub fn imaginary(y: i64) -> Self {
        BasePoint::Interior { re: BigRational::zero(), im: rat_int(y) }
    }
    pub fn point<R: Real>(&self, prec: u32) -> Option<Complex<R>> {
        match self {
            BasePoint::Infinity => None,
            BasePoint::Interior { re, im } => Some(Complex::from_ratios(re, im, prec)),
        }
    }
    /// Fixed by `z ↦ -z̄`.
    pub fn omega_invariant(&self) -> bool {
        match self {
            BasePoint::Infinity => true,
            BasePoint::Interior { re, .. } => re.is_zero(),
        }
    }
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinity" | "oo" => Ok(BasePoint::Infinity),
            "i" => Ok(BasePoint::i()),
            _ => {
                let y = s
                    .strip_suffix('i')
                    .and_then(|y| y.parse::<BigRational>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad base point {s:?}")))?;
                if !y.is_positive() {
                    return Err(Error::Parse(format!("base point {s:?} not in the upper half-plane")));
                }
                Ok(BasePoint::Interior { re: BigRational::zero(), im: y })
            }
        }
    }
}

impl fmt::Display for BasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePoint::Infinity => write!(f, "inf"),
            BasePoint::Interior { re, im } if re.is_zero() => write!(f, "{im}i"),
            BasePoint::Interior { re, im } => write!(f, "{re}+{im}i"),
        }
    }
}

/// Endpoint of a period integral.
#[derive(Clone, Debug)]
pub enum Endpoint<R> {
    Infinity,
    At(Complex<R>),
}

/// Sign in `∂^± = r ± r^ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn sign(self) -> i64 {
        match self {
            Parity::Plus => 1,
            Parity::Minus => -1,
        }
    }
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "+1" => Ok(Parity::Plus),
            "-" | "minus" | "-1" => Ok(Parity::Minus),
            _ => Err(Error::Parse(format!("bad parity {s:?}"))),
        }
    }
}

/// Element `δ` with `f|_k δ = λ f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fold {
    pub mat: IntMat,
    pub lambda: i64,
}

/// Moves points of `ℍ` high up using `Γ0(N)` and, when `f` is an
/// Atkin–Lehner eigenform, `W_N`.
#[derive(Clone, Debug)]
pub struct Reducer {
    pub level: u64,
    pub w_sign: Option<i64>,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    ext_gcd(a, b).0
}

impl Reducer {
    /// `g ∈ SL2(Z)` with `g z` in the standard fundamental domain.
    pub fn sl2_reduce<R: Real>(z: &Complex<R>) -> (IntMat, Complex<R>) {
        let p = z.prec();
        let half = R::from_f64(0.5, p);
        let mut g = IntMat::IDENTITY;
        let mut w = z.clone();
        for _ in 0..100_000 {
            let n = (w.re.clone() + half.clone()).floor_bigint();
            if !n.is_zero() {
                let ni = i128::try_from(&n).expect("translation overflow");
                w = w - Complex::from_real(R::from_bigint(&n, p));
                g = IntMat::new(1, -ni, 0, 1).mul(&g);
            }
            if w.norm_sqr().to_f64() < 1.0 - 1e-12 {
                w = Complex::from_real(-R::one(p)) / w;
                g = IntMat::S.mul(&g);
            } else {
                break;
            }
        }
        (g, w)
    }

    /// Fold raising `z` as high as the search allows.
    pub fn reduce<R: Real>(&self, z: &Complex<R>) -> Fold {
        let (g, zf) = Reducer::sl2_reduce(z);
        let n = self.level as i128;
        if n == 1 {
            return Fold { mat: g, lambda: 1 };
        }
        let (x, y) = zf.to_f64_pair();
        let bound = n + 1;
        let mut best: Option<(f64, Fold)> = None;
        let mut consider = |h: f64, fold: Fold| {
            if best.as_ref().is_none_or(|(b, _)| h > *b) {
                best = Some((h, fold));
            }
        };
        for s in -bound..=bound {
            for t in -bound..=bound {
                if gcd(s, t) != 1 {
                    continue;
                }
                let norm = (s as f64 * x + t as f64).powi(2) + (s as f64 * y).powi(2);
                // bottom row (s, t): c g ∈ Γ0(N)
                if (s * g.a + t * g.c).rem_euclid(n) == 0 {
                    let (_, u, v) = ext_gcd(t, -s);
                    // u t - v s = 1 -> top row (u, v)
                    let c = IntMat::new(u, v, s, t);
                    debug_assert_eq!(c.det(), 1);
                    consider(y / norm, Fold { mat: c.mul(&g), lambda: 1 });
                }
                // top row (s, t) for the W_N branch
                if let Some(w) = self.w_sign {
                    let (_, u, v) = ext_gcd(s, t);
                    // s u + t v = 1 -> bottom row (-v, u)
                    let (b0, d0) = (-v, u);
                    for k in 0..n {
                        let (bb, dd) = (b0 + k * s, d0 + k * t);
                        if (bb * g.a + dd * g.c).rem_euclid(n) == 0 {
                            let c = IntMat::new(s, t, bb, dd);
                            let wn = IntMat::new(0, -1, n, 0);
                            let hgt = y / (n as f64 * ((s as f64 * x + t as f64).powi(2) + (s as f64 * y).powi(2)));
                            consider(hgt, Fold { mat: wn.mul(&c).mul(&g), lambda: w });
                            break;
                        }
                    }
                }
            }
        }
        best.expect("some coset element always qualifies").1
    }
}

/// Folds accepted by the path decomposition must keep both endpoints at
/// least this high.
pub const Y_FLOOR: f64 = 0.05;
pub const Y_TARGET: f64 = 0.3;

/// Evaluates period integrals of one cusp form.
#[derive(Clone, Debug)]
pub struct PeriodEngine<R> {
    pub form: QExpansion,
    pub prec: u32,
    pub work_prec: u32,
    numeric: NumericForm<R>,
    pub reducer: Reducer,
}

/// Extra working bits over the requested precision.
pub const GUARD_BITS: u32 = 64;

impl<R: Real> PeriodEngine<R> {
    pub fn new(form: QExpansion, prec: u32) -> Result<Self> {
        let work_prec = prec + GUARD_BITS;
        let w_sign = if form.level == 1 { None } else { atkin_lehner_sign::<R>(&form, work_prec).ok() };
        let numeric = form.numeric::<R>(work_prec);
        let reducer = Reducer { level: form.level, w_sign };
        Ok(PeriodEngine { form, prec, work_prec, numeric, reducer })
    }

    pub fn weight(&self) -> i64 {
        self.form.weight
    }
    fn m(&self) -> usize {
        (self.form.weight - 2) as usize
    }

    /// `E_l(u) = ∫_u^{i∞} Q_l(v) f(v) dv` for `Q_l(v) = (sv - q)^l (-rv + p)^{m-l}`,
    /// `δ = [[p, q], [r, s]]`, all `l` at once.
    fn eichler_all(&self, delta: &IntMat, u: &Complex<R>) -> Result<Certified<Vec<Complex<R>>, R>> {
        let m = self.m();
        let wp = self.work_prec;
        let target = R::epsilon(wp);
        let sums = self.numeric.eichler_sums(u, m, &target)?;
        let e = |x: i128| R::from_bigint(&BigInt::from(x), wp);
        let (p, q, r, s) = (e(delta.a), e(delta.b), e(delta.c), e(delta.d));
        let a0 = u.scale(&s) - Complex::from_real(q);
        let b0 = Complex::from_real(p) - u.scale(&r);
        // Taylor coefficients in h of (a0 + s h)^l and (b0 - r h)^l
        let lin_pows = |c0: &Complex<R>, c1: &R| -> Vec<Vec<Complex<R>>> {
            let mut out = vec![vec![Complex::one(wp)]];
            for l in 1..=m {
                let prev = &out[l - 1];
                let mut next = vec![Complex::zero(wp); l + 1];
                for (i, x) in prev.iter().enumerate() {
                    next[i] = next[i].clone() + x.clone() * c0.clone();
                    next[i + 1] = next[i + 1].clone() + x.scale(c1);
                }
                out.push(next);
            }
            out
        };
        let pa = lin_pows(&a0, &s);
        let pb = lin_pows(&b0, &-r);
        // weights_r = -(-1)^r r! / (2πi)^{r+1}
        let two_pi_i = Complex::new(R::zero(wp), R::pi(wp).mul_i64(2));
        let mut weights = Vec::with_capacity(m + 1);
        let mut fact = R::one(wp);
        let mut pw = two_pi_i.clone();
        let mut wabs = Vec::with_capacity(m + 1);
        let two_pi = R::pi(wp).mul_i64(2);
        let mut pabs = two_pi.clone();
        for rr in 0..=m {
            if rr > 0 {
                fact = fact.mul_i64(rr as i64);
                pw = pw * two_pi_i.clone();
                pabs = pabs * two_pi.clone();
            }
            let sign = if rr % 2 == 0 { -1 } else { 1 };
            weights.push(Complex::from_real(fact.mul_i64(sign)) / pw.clone());
            wabs.push(fact.clone() / pabs.clone());
        }
        let t: Vec<Complex<R>> = weights.iter().zip(&sums.value).map(|(w, s)| w.clone() * s.clone()).collect();
        let mut vals = Vec::with_capacity(m + 1);
        let mut bound = R::zero(wp);
        for l in 0..=m {
            let (x, y) = (&pa[l], &pb[m - l]);
            let mut acc = Complex::zero(wp);
            let mut bacc = R::zero(wp);
            for (i, xi) in x.iter().enumerate() {
                for (j, yj) in y.iter().enumerate() {
                    let c = xi.clone() * yj.clone();
                    bacc = bacc + c.abs() * wabs[i + j].clone();
                    acc = acc + c * t[i + j].clone();
                }
            }
            bound = R::max_of(bound, bacc);
            vals.push(acc);
        }
        Ok(Certified { value: vals, bound: bound * sums.bound })
    }

    /// Moments `∫_{za}^{zb} τ^j f dτ` across one folded piece.
    fn piece(&self, fold: &Fold, za: &Complex<R>, zb: &Complex<R>) -> Result<Certified<Vec<Complex<R>>, R>> {
        let ua = fold.mat.act(za);
        let ub = fold.mat.act(zb);
        let ea = self.eichler_all(&fold.mat, &ua)?;
        let eb = self.eichler_all(&fold.mat, &ub)?;
        let scale = self.fold_scale(fold);
        let vals = ea.value.into_iter().zip(eb.value).map(|(x, y)| (x - y).scale(&scale)).collect();
        Ok(Certified { value: vals, bound: (ea.bound + eb.bound) * scale.abs() })
    }

    /// `λ D^{1-k/2}`.
    fn fold_scale(&self, fold: &Fold) -> R {
        let wp = self.work_prec;
        let d = R::from_bigint(&BigInt::from(fold.mat.det()), wp);
        let e = 2 - self.form.weight;
        let s = if e % 2 == 0 { d.powi((e / 2) as i32) } else { d.sqrt().powi(e as i32) };
        s.mul_i64(fold.lambda)
    }

    /// `∫_{∞}^{z} τ^j f dτ`.
    fn moments_from_infinity(&self, z: &Complex<R>) -> Result<Certified<Vec<Complex<R>>, R>> {
        let wp = self.work_prec;
        let top = if z.im.to_f64() >= 1.0 {
            z.clone()
        } else {
            Complex::new(z.re.clone(), R::one(wp))
        };
        let e = self.eichler_all(&IntMat::IDENTITY, &top)?;
        let mut vals: Vec<Complex<R>> = e.value.into_iter().map(|x| -x).collect();
        let mut bound = e.bound;
        if z.im.to_f64() < 1.0 {
            let seg = self.segment(&top, z)?;
            vals = vals.into_iter().zip(seg.value).map(|(a, b)| a + b).collect();
            bound = bound + seg.bound;
        }
        Ok(Certified { value: vals, bound })
    }

    /// Straight segment, bisected until each half folds high enough.
    fn segment(&self, za: &Complex<R>, zb: &Complex<R>) -> Result<Certified<Vec<Complex<R>>, R>> {
        let wp = self.work_prec;
        let m = self.m();
        let mut vals = vec![Complex::zero(wp); m + 1];
        let mut bound = R::zero(wp);
        let mut stack = vec![(za.clone(), zb.clone(), 0u32)];
        while let Some((a, b, depth)) = stack.pop() {
            let mid = (a.clone() + b.clone()).scale(&R::from_f64(0.5, wp));
            let fold = self.reducer.reduce(&mid);
            let hm = fold.mat.act(&mid).im.to_f64();
            let thresh = Y_FLOOR.max(Y_TARGET.min(hm / 2.0));
            let ha = fold.mat.act(&a).im.to_f64();
            let hb = fold.mat.act(&b).im.to_f64();
            if (ha >= thresh && hb >= thresh) || depth > 200 {
                let piece = self.piece(&fold, &a, &b)?;
                for (v, p) in vals.iter_mut().zip(piece.value) {
                    *v = v.clone() + p;
                }
                bound = bound + piece.bound;
            } else {
                stack.push((mid.clone(), b, depth + 1));
                stack.push((a, mid, depth + 1));
            }
        }
        Ok(Certified { value: vals, bound })
    }

    /// Moments `J_j = ∫_{z0}^{z1} τ^j f(τ) dτ`, `j = 0..=k-2`.
    pub fn moments(&self, z0: &Endpoint<R>, z1: &Endpoint<R>) -> Result<Certified<Vec<Complex<R>>, R>> {
        let wp = self.work_prec;
        let m = self.m();
        let zero = || Certified { value: vec![Complex::zero(wp); m + 1], bound: R::zero(wp) };
        let neg = |c: Certified<Vec<Complex<R>>, R>| Certified { value: c.value.into_iter().map(|x| -x).collect(), bound: c.bound };
        match (z0, z1) {
            (Endpoint::Infinity, Endpoint::Infinity) => Ok(zero()),
            (Endpoint::Infinity, Endpoint::At(z)) => self.moments_from_infinity(&z.with_prec(wp)),
            (Endpoint::At(z), Endpoint::Infinity) => self.moments_from_infinity(&z.with_prec(wp)).map(neg),
            (Endpoint::At(a), Endpoint::At(b)) => {
                if a.re == b.re && a.im == b.im {
                    return Ok(zero());
                }
                self.segment(&a.with_prec(wp), &b.with_prec(wp))
            }
        }
    }

    /// `∫_{z0}^{z1} P(1, -τ) f(τ) dτ`.
    pub fn period_integral(
        &self,
        p: &HomPoly<Complex<R>>,
        z0: &Endpoint<R>,
        z1: &Endpoint<R>,
    ) -> Result<Certified<Complex<R>, R>> {
        if p.k() != self.form.weight {
            return Err(Error::WeightMismatch(p.k(), self.form.weight));
        }
        let mm = self.moments(z0, z1)?;
        let m = self.m();
        let mut acc = Complex::zero(self.work_prec);
        let mut babs = R::zero(self.work_prec);
        for (j, c) in p.coeffs().iter().enumerate() {
            // x^j y^{m-j} at (1, -τ) is (-τ)^{m-j}
            let term = c.clone() * mm.value[m - j].clone();
            acc = if (m - j).is_multiple_of(2) { acc + term } else { acc - term };
            babs = babs + c.abs();
        }
        Ok(Certified { value: acc.with_prec(self.prec), bound: babs * mm.bound })
    }

    /// Functional values `F_a = ∫ X^a Y^{m-a}|_{(1,-τ)} f dτ` as `P_F`.
    pub fn functional(&self, z0: &Endpoint<R>, z1: &Endpoint<R>) -> Result<Certified<HomPoly<Complex<R>>, R>> {
        let m = self.m();
        let mm = self.moments(z0, z1)?;
        let vals: Vec<Complex<R>> = (0..=m)
            .map(|a| {
                let j = m - a;
                if j.is_multiple_of(2) {
                    mm.value[j].clone()
                } else {
                    -mm.value[j].clone()
                }
            })
            .collect();
        // coefficients of P_F are binomial multiples of the moments
        let bound = mm.bound * R::from_bigint(&binomial(m as i64, (m / 2) as i64), self.work_prec);
        Ok(Certified { value: dual_to_poly(self.form.weight, BigRational::zero(), &vals), bound })
    }

    /// The period cocycle `r(γ) = ∫_{z0}^{γ z0} P(1, -τ) f dτ` in the `P_F` model.
    pub fn cocycle_value(&self, gamma: &IntMat, base: &BasePoint) -> Result<HomPoly<Complex<R>>> {
        Ok(self.cocycle_certified(gamma, base)?.value)
    }

    /// `cocycle_value` with a bound on the error of every coefficient.
    pub fn cocycle_certified(&self, gamma: &IntMat, base: &BasePoint) -> Result<Certified<HomPoly<Complex<R>>, R>> {
        let wp = self.work_prec;
        let zero = || Certified {
            value: HomPoly::zero(self.form.weight, BigRational::zero(), &Complex::zero(self.prec)),
            bound: R::zero(self.prec),
        };
        if gamma.is_pm_identity() {
            return Ok(zero());
        }
        let out = match base.point::<R>(wp) {
            Some(z0) => {
                let z1 = gamma.act(&z0);
                self.functional(&Endpoint::At(z0), &Endpoint::At(z1))?
            }
            None => {
                if gamma.c == 0 {
                    return Ok(zero());
                }
                // r_∞(γ) = M + r_i(γ) - γ·M with M = ∫_∞^i
                let i = Complex::i(wp);
                let mi = self.functional(&Endpoint::Infinity, &Endpoint::At(i.clone()))?;
                let ri = self.functional(&Endpoint::At(i.clone()), &Endpoint::At(gamma.act(&i)))?;
                let value = mi.value.add(&ri.value).sub(&act_int(gamma, &mi.value));
                // each monomial maps to coefficients of total size at most s^m,
                // s the largest row or column sum of |γ|
                let (a, b, c, d) = (gamma.a.abs(), gamma.b.abs(), gamma.c.abs(), gamma.d.abs());
                let spread = (a + b).max(c + d).max(a + c).max(b + d);
                let m = self.m() as u32;
                let grow = R::from_bigint(&(BigInt::from(spread).pow(m) * BigInt::from(m + 1)), wp);
                Certified { value, bound: mi.bound.clone() + ri.bound + mi.bound * grow }
            }
        };
        let value = out.value.map(|c| c.with_prec(self.prec));
        // rounding to the output precision; work-precision rounding sits
        // GUARD_BITS below it
        let rounding = value.max_abs() * R::epsilon(self.prec).mul_i64(4);
        Ok(Certified { bound: out.bound.with_prec(self.prec) + rounding, value })
    }

    /// `ω·r(ωγω)`, the `ω`-conjugate cocycle, by a separate integration.
    pub fn omega_value(&self, gamma: &IntMat, base: &BasePoint) -> Result<HomPoly<Complex<R>>> {
        let v = self.cocycle_value(&gamma.omega_conj(), base)?;
        Ok(omega_act(&v))
    }

    /// `∂^±(f)(γ)`; the antiholomorphic half is the conjugate of the
    /// holomorphic one when the base point is `ω`-stable.
    pub fn es_value(&self, parity: Parity, gamma: &IntMat, base: &BasePoint) -> Result<HomPoly<Complex<R>>> {
        let r = self.cocycle_value(gamma, base)?;
        let rw = if base.omega_invariant() { r.conj().neg() } else { self.omega_value(gamma, base)? };
        Ok(if parity == Parity::Plus { r.add(&rw) } else { r.sub(&rw) })
    }

    /// Cocycle of the given kind on a generator set.
    pub fn cocycle(&self, gens: &GeneratorSet, kind: CocycleKind, base: &BasePoint) -> Result<Cocycle<R>> {
        let values = gens
            .mats
            .par_iter()
            .map(|g| self.value_of(kind, g, base))
            .collect::<Result<Vec<_>>>()?;
        Ok(Cocycle { k: self.form.weight, base: base.clone(), gens: gens.clone(), values, prec: self.prec })
    }

    pub fn value_of(&self, kind: CocycleKind, g: &IntMat, base: &BasePoint) -> Result<HomPoly<Complex<R>>> {
        match kind {
            CocycleKind::Plain => self.cocycle_value(g, base),
            CocycleKind::Es(p) => self.es_value(p, g, base),
        }
    }
}

/// `ω` acting on a `P_F` polynomial by plain substitution.
pub fn omega_act<R: Real>(p: &HomPoly<Complex<R>>) -> HomPoly<Complex<R>> {
    p.substitute(&GroupElement::omega())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CocycleKind {
    Plain,
    Es(Parity),
}

/// A 1-cocycle stored by its values on generators.
#[derive(Clone, Debug)]
pub struct Cocycle<R> {
    pub k: i64,
    pub base: BasePoint,
    pub gens: GeneratorSet,
    pub values: Vec<HomPoly<Complex<R>>>,
    pub prec: u32,
}

impl<R: Real> Cocycle<R> {
    pub fn zero(k: i64, gens: &GeneratorSet, base: BasePoint, prec: u32) -> Self {
        let z = HomPoly::zero(k, BigRational::zero(), &Complex::zero(prec));
        Cocycle { k, base, gens: gens.clone(), values: vec![z; gens.len()], prec }
    }

    fn zero_poly(&self) -> HomPoly<Complex<R>> {
        HomPoly::zero(self.k, BigRational::zero(), &Complex::zero(self.prec))
    }

    /// Extension to words via `r(gh) = r(g) + g·r(h)`, `r(g^{-1}) = -g^{-1}·r(g)`.
    pub fn eval_word(&self, w: &GroupWord) -> HomPoly<Complex<R>> {
        let mut acc = self.zero_poly();
        let mut prefix = IntMat::IDENTITY;
        for &(i, e) in &w.0 {
            let g = self.gens.mats[i];
            let v = if e > 0 { self.values[i].clone() } else { act_int(&g.adj(), &self.values[i]).neg() };
            acc = acc.add(&act_int(&prefix, &v));
            prefix = prefix.mul(&if e > 0 { g } else { g.adj() });
        }
        acc
    }

    pub fn map(&self, f: impl Fn(&HomPoly<Complex<R>>) -> HomPoly<Complex<R>>) -> Self {
        Cocycle { values: self.values.iter().map(f).collect(), ..self.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        Cocycle { values: self.values.iter().zip(&o.values).map(|(a, b)| a.add(b)).collect(), ..self.clone() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        Cocycle { values: self.values.iter().zip(&o.values).map(|(a, b)| a.sub(b)).collect(), ..self.clone() }
    }
    pub fn scale(&self, s: &Complex<R>) -> Self {
        self.map(|p| p.scale(s))
    }
    pub fn conj(&self) -> Self {
        self.map(HomPoly::conj)
    }

    pub fn max_abs(&self) -> R {
        self.values.iter().fold(R::zero(self.prec), |m, p| R::max_of(m, p.max_abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(HomPoly::is_zero)
    }

    /// `r^ω(g) = ω·r(ωgω)`, read off the generator values.
    pub fn omega_twist(&self) -> Result<Self> {
        let values = self
            .gens
            .mats
            .iter()
            .map(|g| {
                let (j, e) = self.gens.find(&g.omega_conj()).ok_or(Error::NotOmegaStable)?;
                Ok(omega_act(&self.eval_word(&GroupWord::letter(j, e))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cocycle { values, ..self.clone() })
    }

    /// `((r + r^ω)/2, (r - r^ω)/2)`.
    pub fn parity_decompose(&self) -> Result<(Self, Self)> {
        let rw = self.omega_twist()?;
        let half = Complex::from_f64(0.5, 0.0, self.prec);
        Ok((self.add(&rw).scale(&half), self.sub(&rw).scale(&half)))
    }

    /// The coboundary `g ↦ (g - 1)·m`.
    pub fn coboundary(k: i64, gens: &GeneratorSet, base: BasePoint, m: &HomPoly<Complex<R>>) -> Self {
        let values = gens.mats.iter().map(|g| act_int(g, m).sub(m)).collect();
        Cocycle { k, base, gens: gens.clone(), values, prec: m.prec() }
    }

    /// Least-squares `m` with `r(g) ≈ (g - 1)·m` on all generators; the
    /// residual is absolute.
    pub fn solve_coboundary(&self) -> CoboundaryFit<R> {
        let fit = fit_cocycle(&[], self, self.prec);
        CoboundaryFit { m: fit.m, residual: fit.residual }
    }
}

/// Outcome of a coboundary solve.
#[derive(Clone, Debug)]
pub struct CoboundaryFit<R> {
    pub m: HomPoly<Complex<R>>,
    pub residual: f64,
}

/// Outcome of fitting `target = Σ λ_i basis_i + (g - 1)·m`.
#[derive(Clone, Debug)]
pub struct CocycleFit<R> {
    pub scalars: Vec<Complex<R>>,
    pub m: HomPoly<Complex<R>>,
    pub residual: f64,
}

/// Joint least-squares fit of `target` by scalar multiples of `basis`
/// plus a coboundary. The residual is the absolute 2-norm.
pub fn fit_cocycle<R: Real>(basis: &[&Cocycle<R>], target: &Cocycle<R>, prec: u32) -> CocycleFit<R> {
    let k = target.k;
    let m = (k - 2) as usize;
    let nb = basis.len();
    let ncols = nb + m + 1;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (gi, g) in target.gens.mats.iter().enumerate() {
        let ge = g.to_group_element();
        let sm = subst_matrix(&ge.a, &ge.b, &ge.c, &ge.d, m, &BigRational::zero(), &BigRational::one());
        for j in 0..=m {
            let mut row = vec![Complex::zero(prec); ncols];
            for (bi, b) in basis.iter().enumerate() {
                row[bi] = b.values[gi].coeff(j).clone();
            }
            // ((g - 1)·M)_j = Σ_a M_a sm[a][j] - M_j
            for a in 0..=m {
                let mut e = sm[a][j].clone();
                if a == j {
                    e -= BigRational::one();
                }
                row[nb + a] = Complex::from_ratios(&e, &BigRational::zero(), prec);
            }
            rows.push(row);
            rhs.push(target.values[gi].coeff(j).clone());
        }
    }
    let sol = least_squares(&rows, &rhs, prec);
    let residual = sol.residual.to_f64();
    let mpoly = HomPoly::new(k, BigRational::zero(), sol.x[nb..].to_vec());
    CocycleFit { scalars: sol.x[..nb].to_vec(), m: mpoly, residual }
}

/// Largest coefficient difference relative to `scale` (absolute if `scale = 0`).
pub fn rel_residual<R: Real>(diff: &HomPoly<Complex<R>>, scale: &R) -> f64 {
    let d = diff.max_abs().to_f64();
    let s = scale.to_f64();
    if s > 0.0 {
        d / s
    } else {
        d
    }
}

/// Manin relations for `ρ = r(S)` at base `∞` and level 1:
/// `ρ + S·ρ = 0` and, for `U = TS`, `(1 + U + U²)·r(U) = 0`.
pub fn manin_check<R: Real>(engine: &PeriodEngine<R>, kind: CocycleKind, tol: f64) -> Result<Vec<CheckRecord>> {
    let k = engine.weight();
    let base = BasePoint::Infinity;
    let rho = engine.value_of(kind, &IntMat::S, &base)?;
    let u = IntMat::T.mul(&IntMat::S);
    let ru = engine.value_of(kind, &u, &base)?;
    let scale = R::max_of(rho.max_abs(), ru.max_abs());
    let r1 = rel_residual(&rho.add(&act_int(&IntMat::S, &rho)), &scale);
    let u2 = u.mul(&u);
    let r2 = rel_residual(&ru.add(&act_int(&u, &ru)).add(&act_int(&u2, &ru)), &scale);
    let label = kind_label(kind);
    Ok(vec![
        CheckRecord::new(format!("manin_S[{label}]"), k, 1, r1, tol),
        CheckRecord::new(format!("manin_U[{label}]"), k, 1, r2, tol),
    ])
}

/// Shortest word (length at most 5) in the first half of `gens` that
/// evaluates to `±[[1, 0], [N, 1]]`, the stabilizer of the cusp `0`.
pub fn cusp_zero_word(gens: &GeneratorSet) -> Option<GroupWord> {
    let target = IntMat::new(1, 0, gens.level as i128, 1);
    let hits = |g: &IntMat| *g == target || *g == target.neg() || *g == target.adj() || *g == target.adj().neg();
    let letters: Vec<(usize, i32)> = (0..gens.len()).flat_map(|i| [(i, 1), (i, -1)]).collect();
    let mut frontier = vec![(GroupWord::identity(), IntMat::IDENTITY)];
    for _ in 0..5 {
        let mut next = Vec::new();
        for (w, m) in &frontier {
            for &(i, e) in &letters {
                let g = if e > 0 { gens.mats[i] } else { gens.mats[i].adj() };
                let p = m.mul(&g);
                let w2 = w.concat(&GroupWord::letter(i, e));
                if hits(&p) {
                    return Some(w2);
                }
                next.push((w2, p));
            }
        }
        frontier = next;
    }
    None
}

/// Relations at level `N > 1` and base `∞`: the parabolic `Q` fixing `0`
/// has `r(Q) = (1 - Q)·∫_∞^0`, which vanishes in weight 2, and the value of
/// `Q` extended from generator values along a word must match the direct
/// integral.
pub fn manin_check_level<R: Real>(
    engine: &PeriodEngine<R>,
    gens: &GeneratorSet,
    kind: CocycleKind,
    tol: f64,
) -> Result<Vec<CheckRecord>> {
    let k = engine.weight();
    let base = BasePoint::Infinity;
    let word = cusp_zero_word(gens).ok_or(Error::NotInGroup(IntMat::new(1, 0, gens.level as i128, 1).entries_i64()))?;
    let q = word.eval(gens);
    let c = engine.cocycle(gens, kind, &base)?;
    let direct = engine.value_of(kind, &q, &base)?;
    let ext = c.eval_word(&word);
    let scale = R::max_of(c.max_abs(), direct.max_abs());
    let label = kind_label(kind);
    let mut out = vec![CheckRecord::new(format!("manin_word[{label}]"), k, 1, rel_residual(&ext.sub(&direct), &scale), tol)
        .with_detail(word.display(gens))];
    if k == 2 {
        out.push(CheckRecord::new(format!("manin_parabolic[{label}]"), k, 1, rel_residual(&direct, &scale), tol));
    }
    Ok(out)
}

pub fn kind_label(kind: CocycleKind) -> &'static str {
    match kind {
        CocycleKind::Plain => "r",
        CocycleKind::Es(Parity::Plus) => "+",
        CocycleKind::Es(Parity::Minus) => "-",
    }
}

/// Left coset representatives of `Γ0(N) diag(1, p) Γ0(N)`, `p ∤ N`.
pub fn hecke_reps(p: i128) -> Vec<IntMat> {
    let mut v = vec![IntMat::new(p, 0, 0, 1)];
    v.extend((0..p).map(|j| IntMat::new(1, j, 0, p)));
    v
}

/// Outcome of the Hecke equivariance test.
#[derive(Clone, Debug)]
pub struct HeckeOutcome<R> {
    pub eigenvalue: Complex<R>,
    pub expected: BigRational,
    pub rel_error: f64,
    pub residual: f64,
}

/// `(T_p c)(γ) = Σ_i adj(α_i)·c(γ_i)` with `α_i γ = γ_i α_{σ(i)}`.
pub fn hecke_image<R: Real>(
    engine: &PeriodEngine<R>,
    kind: CocycleKind,
    p: u64,
    gens: &GeneratorSet,
    base: &BasePoint,
) -> Result<Cocycle<R>> {
    let level = engine.form.level;
    if level.is_multiple_of(p) {
        return Err(Error::LevelNotCoprime { p, level });
    }
    let reps = hecke_reps(p as i128);
    let mut values = Vec::with_capacity(gens.len());
    for g in &gens.mats {
        let mut acc = HomPoly::zero(engine.weight(), BigRational::zero(), &Complex::zero(engine.prec));
        for ai in &reps {
            let x = ai.mul(g);
                let gi = reps
                .iter()
                .find_map(|aj| {
                    let y = x.mul(&aj.adj());
                    let pp = p as i128;
                    if [y.a, y.b, y.c, y.d].iter().all(|e| e % pp == 0) {
                        let gi = IntMat::new(y.a / pp, y.b / pp, y.c / pp, y.d / pp);
                        gi.in_gamma0(level).then_some(gi)
                    } else {
                        None
                    }
                })
                .expect("coset representatives are permuted");
            let v = engine.value_of(kind, &gi, base)?;
            acc = acc.add(&act_int(&ai.adj(), &v));
        }
        values.push(acc);
    }
    Ok(Cocycle { k: engine.weight(), base: base.clone(), gens: gens.clone(), values, prec: engine.prec })
}

/// Fits `T_p c = λ c + coboundary` and compares `λ` with `a_p` read from
/// the q-expansion.
pub fn hecke_equivariance<R: Real>(
    engine: &PeriodEngine<R>,
    kind: CocycleKind,
    p: u64,
    gens: &GeneratorSet,
    base: &BasePoint,
) -> Result<HeckeOutcome<R>> {
    let c = engine.cocycle(gens, kind, base)?;
    let tc = hecke_image(engine, kind, p, gens, base)?;
    let expected = engine.form.coeff(p as usize).clone();
    if c.is_zero() {
        return Ok(HeckeOutcome {
            eigenvalue: Complex::from_ratios(&expected, &BigRational::zero(), engine.prec),
            expected,
            rel_error: tc.max_abs().to_f64(),
            residual: tc.max_abs().to_f64(),
        });
    }
    let fit = fit_cocycle(&[&c], &tc, engine.prec);
    let scale = R::max_of(c.max_abs(), tc.max_abs()).to_f64();
    let lam = fit.scalars[0].clone();
    let ex: Complex<R> = Complex::from_ratios(&expected, &BigRational::zero(), engine.prec);
    let denom = if expected.is_zero() { 1.0 } else { ex.abs().to_f64() };
    let rel_error = (lam.clone() - ex).abs().to_f64() / denom;
    Ok(HeckeOutcome { eigenvalue: lam, expected, rel_error, residual: fit.residual / scale })
}

/// Exact `dim H¹(SL2(Z), V(k)^∨)` from the Manin presentation.
pub fn cohomology_dim(k: i64) -> usize {
    assert!(k >= 2 && k % 2 == 0, "even weight at least 2");
    let m = (k - 2) as usize;
    let n = m + 1;
    let action = |g: &IntMat| -> Vec<Vec<BigRational>> {
        let ge = g.to_group_element();
        let sm = subst_matrix(&ge.a, &ge.b, &ge.c, &ge.d, m, &BigRational::zero(), &BigRational::one());
        // column a is the image of the a-th monomial
        (0..n).map(|j| (0..n).map(|a| sm[a][j].clone()).collect()).collect()
    };
    let id = |i: usize, j: usize| if i == j { BigRational::one() } else { BigRational::zero() };
    let s = action(&IntMat::S);
    let u = action(&IntMat::T.mul(&IntMat::S));
    let u2 = action(&IntMat::T.mul(&IntMat::S).mul(&IntMat::T).mul(&IntMat::S));
    let one_plus_s: Vec<Vec<_>> = (0..n).map(|i| (0..n).map(|j| &s[i][j] + id(i, j)).collect()).collect();
    let norm_u: Vec<Vec<_>> = (0..n).map(|i| (0..n).map(|j| &u[i][j] + &u2[i][j] + id(i, j)).collect()).collect();
    let mut cob: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| &s[i][j] - id(i, j)).collect()).collect();
    cob.extend((0..n).map(|i| (0..n).map(|j| &u[i][j] - id(i, j)).collect::<Vec<_>>()));
    let z = (n - rank(&one_plus_s)) + (n - rank(&norm_u));
    z - rank(&cob)
}

/// Rationality analysis of coefficient ratios of one parity class.
#[derive(Clone, Debug)]
pub struct RatioAnalysis {
    /// Degree index used for normalisation.
    pub normalizer: usize,
    pub ratios: Vec<(usize, f64, Option<BigRational>)>,
}

impl RatioAnalysis {
    pub fn all_rational(&self) -> bool {
        self.ratios.iter().all(|r| r.2.is_some())
    }
}

/// Ratios `c_j / c_norm` over the indices `j` of the given parity
/// (`odd = true` for odd `j`), normalised by the highest such index with
/// a non-negligible coefficient.
pub fn ratio_analysis<R: Real>(p: &HomPoly<Complex<R>>, odd: bool, max_den: u64) -> RatioAnalysis {
    let prec = p.prec();
    let scale = p.max_abs();
    let small = scale.clone() * R::epsilon(prec).sqrt();
    let idx: Vec<usize> = (0..p.coeffs().len()).filter(|j| (j % 2 == 1) == odd).collect();
    let normalizer = *idx.iter().rev().find(|&&j| p.coeff(j).abs() > small).unwrap_or(&idx[idx.len() - 1]);
    let c0 = p.coeff(normalizer).clone();
    let tol = R::epsilon(prec).sqrt();
    let ratios = idx
        .iter()
        .map(|&j| {
            let q = p.coeff(j).clone() / c0.clone();
            let real = q.im.abs() <= tol.clone() * (R::one(prec) + q.re.abs());
            let rat = if real { recognize_rational(&q.re, max_den, &tol) } else { None };
            (j, q.re.to_f64(), rat)
        })
        .collect();
    RatioAnalysis { normalizer, ratios }
}
