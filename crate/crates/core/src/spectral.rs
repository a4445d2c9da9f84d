//! Character-theoretic statistics of word maps.
//!
//! Fiber counts from the character-sum formulas (with exact integrality
//! assertions), Witten zeta values and the derived L1/equidistribution
//! parameters, exact L1 distances, equidistribution witnesses and measure
//! preservation checks, the PSL(2,q) closed-form deviations, the S_n
//! character bound, and fixed-point tail bounds.
//!
//! Exact quantities are `BigRational`; irrational tolerances are handled by
//! [`Tolerance`], which compares |x| <= r^(1/2) or |x| <= r^(1/4) by raising
//! the (rational) left side to the matching power, so every acceptance
//! inequality is decided in exact arithmetic.

#![allow(clippy::needless_range_loop)]

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::chartab::CharacterTable;
use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::group::classes::ClassData;
use crate::group::{Family, GroupHandle};

fn br_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn br_u128(v: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn br(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// How a fiber table was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

/// Per-class fiber data of a word map G^m -> G.
///
/// In exhaustive mode `counts[c]` is the per-element fiber size N(g) for g
/// in class c. In sampled mode it is the number of sample hits landing in
/// class c.
#[derive(Clone, Debug)]
pub struct FiberTable {
    pub word_id: String,
    pub arity: u32,
    pub group_order: u64,
    pub class_sizes: Vec<u64>,
    pub counts: Vec<u128>,
    /// |X| for exhaustive tables, the sample count for sampled ones.
    pub domain: u128,
    pub mode: FiberMode,
}

impl FiberTable {
    /// A table for an arbitrary finite map into the group, given per-element
    /// fiber counts per class; the domain size is what the counts tile.
    pub fn synthetic(word_id: &str, class_sizes: Vec<u64>, counts: Vec<u128>) -> FiberTable {
        let domain = counts
            .iter()
            .zip(&class_sizes)
            .map(|(&n, &s)| n * s as u128)
            .sum();
        let group_order = class_sizes.iter().sum();
        FiberTable {
            word_id: word_id.to_string(),
            arity: 1,
            group_order,
            class_sizes,
            counts,
            domain,
            mode: FiberMode::Exhaustive,
        }
    }

    pub fn domain_size(&self) -> u128 {
        self.domain
    }

    /// Total-mass conservation: exhaustive tables must tile |G|^m exactly.
    pub fn check_conservation(&self) -> Result<()> {
        let total: u128 = self
            .counts
            .iter()
            .zip(&self.class_sizes)
            .map(|(&n, &s)| match self.mode {
                FiberMode::Exhaustive => n * s as u128,
                FiberMode::Sampled { .. } => n,
            })
            .sum();
        if total != self.domain_size() {
            return Err(Error::Mismatch(format!(
                "fiber counts for {} sum to {total}, expected {}",
                self.word_id,
                self.domain_size()
            )));
        }
        Ok(())
    }

    /// Per-element probability mass of class c.
    pub fn per_element_mass(&self, c: usize) -> BigRational {
        match &self.mode {
            FiberMode::Exhaustive => {
                BigRational::new(BigInt::from(self.counts[c]), BigInt::from(self.domain_size()))
            }
            FiberMode::Sampled { samples, .. } => BigRational::new(
                BigInt::from(self.counts[c]),
                BigInt::from(*samples as u128 * self.class_sizes[c] as u128),
            ),
        }
    }

    /// Fiber ratio N(g) |Y| / |X| (1 = perfectly uniform).
    pub fn ratio(&self, c: usize) -> BigRational {
        self.per_element_mass(c) * br_u128(self.group_order as u128)
    }

    /// Number of elements with a nonempty fiber.
    pub fn covered_elements(&self) -> u64 {
        self.counts
            .iter()
            .zip(&self.class_sizes)
            .filter(|(&n, _)| n > 0)
            .map(|(_, &s)| s)
            .sum()
    }
}

/// A class-function probability distribution on a group.
#[derive(Clone, Debug)]
pub struct Distribution {
    pub word_id: String,
    pub class_sizes: Vec<u64>,
    /// Per-element mass, constant on each class.
    pub masses: Vec<BigRational>,
}

impl Distribution {
    pub fn from_fibers(fibers: &FiberTable) -> Distribution {
        Distribution {
            word_id: fibers.word_id.clone(),
            class_sizes: fibers.class_sizes.clone(),
            masses: (0..fibers.counts.len()).map(|c| fibers.per_element_mass(c)).collect(),
        }
    }

    pub fn uniform(class_sizes: &[u64]) -> Distribution {
        let n: u64 = class_sizes.iter().sum();
        Distribution {
            word_id: "uniform".into(),
            class_sizes: class_sizes.to_vec(),
            masses: vec![BigRational::new(BigInt::one(), BigInt::from(n)); class_sizes.len()],
        }
    }

    /// All mass on the identity class (class 0).
    pub fn point_mass_identity(class_sizes: &[u64]) -> Distribution {
        let mut masses = vec![BigRational::zero(); class_sizes.len()];
        masses[0] = BigRational::one();
        Distribution {
            word_id: "point-mass".into(),
            class_sizes: class_sizes.to_vec(),
            masses,
        }
    }

    pub fn total(&self) -> BigRational {
        self.masses
            .iter()
            .zip(&self.class_sizes)
            .map(|(m, &s)| m * br_u128(s as u128))
            .sum()
    }

    pub fn check_total(&self) -> Result<()> {
        if self.total() != BigRational::one() {
            return Err(Error::Internal(format!("distribution {} does not sum to 1", self.word_id)));
        }
        Ok(())
    }
}

/// Witten zeta value: sum over irreducible degrees of d^-s.
pub fn witten_zeta(table: &CharacterTable, s: f64) -> f64 {
    table.degrees().iter().map(|&d| (d as f64).powf(-s)).sum()
}

/// The L1 bound sqrt(zeta(2)-1) and equidistribution parameter (zeta(2)-1)^(1/4).
#[derive(Clone, Debug)]
pub struct DeviationBounds {
    pub zeta2_minus_one: BigRational,
    pub delta: f64,
    pub epsilon: f64,
}

pub fn deviation_bounds(table: &CharacterTable) -> DeviationBounds {
    let base = table.zeta2_minus_one();
    let x = base.to_f64().unwrap_or(f64::INFINITY);
    DeviationBounds {
        zeta2_minus_one: base,
        delta: x.sqrt(),
        epsilon: x.powf(0.25),
    }
}

/// Exact commutator fiber counts N(g) = |G| sum_chi chi(g)/chi(1).
pub fn frobenius_fibers(table: &CharacterTable) -> Result<FiberTable> {
    character_sum_fibers(table, (0..table.char_count()).collect(), "[x1,x2]")
}

/// Exact fiber counts of (x,y) -> x^2 y^2: the same sum over real characters.
pub fn squares_word_fibers(table: &CharacterTable) -> Result<FiberTable> {
    character_sum_fibers(table, table.real_characters(), "x1^2x2^2")
}

fn character_sum_fibers(table: &CharacterTable, chis: Vec<usize>, word_id: &str) -> Result<FiberTable> {
    let k = table.class_count();
    let order = BigRational::from_integer(BigInt::from(table.group_order()));
    let mut counts = Vec::with_capacity(k);
    for t in 0..k {
        let mut acc = CycNum::zero();
        for &chi in &chis {
            let d = table.degree(chi) as i64;
            let term = table.value(chi, t).to_cyc_num().scale(&br(1, d));
            acc = acc.add(&term);
        }
        let exact = acc.scale(&order);
        let n = exact.as_integer().map_err(|_| {
            Error::Internal(format!("non-integral fiber count for {word_id} at class {t}"))
        })?;
        if n.is_negative() {
            return Err(Error::Internal(format!("negative fiber count for {word_id} at class {t}")));
        }
        // Float mirror must agree after rounding.
        let mut float_acc = 0.0;
        for &chi in &chis {
            let (re, _) = table.value_complex(chi, t);
            float_acc += re / table.degree(chi) as f64;
        }
        float_acc *= table.group_order() as f64;
        let n_u128 = n.to_u128().ok_or_else(|| Error::Internal("fiber count overflow".into()))?;
        if (float_acc - n_u128 as f64).abs() > 1e-6 * (1.0 + n_u128 as f64) {
            return Err(Error::Internal(format!(
                "float mirror {float_acc} far from exact fiber {n_u128}"
            )));
        }
        counts.push(n_u128);
    }
    let fibers = FiberTable {
        word_id: word_id.to_string(),
        arity: 2,
        group_order: table.group_order(),
        class_sizes: table.class_sizes().to_vec(),
        counts,
        domain: (table.group_order() as u128).pow(2),
        mode: FiberMode::Exhaustive,
    };
    fibers.check_conservation()?;
    Ok(fibers)
}

/// Per-class deviation Delta(g) = N(g)/|G| - 1 and the absolute-value bound
/// E(g) = sum_{chi != 1} |chi(g)|/chi(1).
#[derive(Clone, Debug)]
pub struct DeviationRow {
    pub class: usize,
    pub delta: BigRational,
    pub e_bound: f64,
}

pub fn deviation_report(table: &CharacterTable, fibers: &FiberTable) -> Result<Vec<DeviationRow>> {
    let order = br_u128(table.group_order() as u128);
    let mut rows = Vec::with_capacity(table.class_count());
    for t in 0..table.class_count() {
        let delta = br_u128(fibers.counts[t]) / order.clone() - BigRational::one();
        let mut e = 0.0;
        for chi in 1..table.char_count() {
            let (re, im) = table.value_complex(chi, t);
            e += (re * re + im * im).sqrt() / table.degree(chi) as f64;
        }
        let d = delta.to_f64().unwrap();
        if d.abs() > e + 1e-9 {
            return Err(Error::Internal(format!("|Delta| > E at class {t}: {d} vs {e}")));
        }
        rows.push(DeviationRow {
            class: t,
            delta,
            e_bound: e,
        });
    }
    Ok(rows)
}

/// Fourier coefficients a_chi with P = |G|^-1 sum a_chi chi.
pub fn fourier_coefficients(dist: &Distribution, table: &CharacterTable) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(table.char_count());
    for chi in 0..table.char_count() {
        let exact = fourier_coefficient_exact(dist, table, chi);
        out.push(exact.to_complex());
    }
    // a_1 = 1 exactly for any probability distribution.
    let a1 = fourier_coefficient_exact(dist, table, 0);
    if !a1.eq_value(&CycNum::from_integer(1)) {
        return Err(Error::Internal("trivial Fourier coefficient is not 1".into()));
    }
    // Plancherel: sum_g P(g)^2 = |G|^-1 sum |a_chi|^2.
    let lhs: f64 = dist
        .masses
        .iter()
        .zip(&dist.class_sizes)
        .map(|(m, &s)| {
            let x = m.to_f64().unwrap();
            s as f64 * x * x
        })
        .sum();
    let rhs: f64 = out.iter().map(|&(re, im)| re * re + im * im).sum::<f64>() / table.group_order() as f64;
    if (lhs - rhs).abs() > 1e-8 * (1.0 + lhs.abs()) {
        return Err(Error::Internal(format!("Plancherel identity fails: {lhs} vs {rhs}")));
    }
    Ok(out)
}

/// Exact Fourier coefficient: sum_c |C| P_c conj(chi(g_c)).
pub fn fourier_coefficient_exact(dist: &Distribution, table: &CharacterTable, chi: usize) -> CycNum {
    let mut acc = CycNum::zero();
    for c in 0..table.class_count() {
        if dist.masses[c].is_zero() {
            continue;
        }
        // conj(chi(g)) = chi(g^-1): read the value at the inverse class.
        let v = table.value(chi, table.inverse_class(c)).to_cyc_num();
        let w = dist.masses[c].clone() * br_u128(dist.class_sizes[c] as u128);
        acc = acc.add(&v.scale(&w));
    }
    acc
}

/// Exact L1 distance between two class distributions on the same group.
pub fn l1_distance(p: &Distribution, q: &Distribution) -> Result<BigRational> {
    if p.class_sizes != q.class_sizes {
        return Err(Error::InvalidParameter("distributions live on different groups".into()));
    }
    let mut acc = BigRational::zero();
    for c in 0..p.masses.len() {
        let diff = (p.masses[c].clone() - q.masses[c].clone()).abs();
        acc += diff * br_u128(p.class_sizes[c] as u128);
    }
    Ok(acc)
}

/// A tolerance that may be an exact rational, or the square/fourth root of
/// one; root forms compare by raising the other side to the matching power.
#[derive(Clone, Debug)]
pub enum Tolerance {
    Exact(BigRational),
    SqrtOf(BigRational),
    FourthRootOf(BigRational),
    Float(f64),
}

impl Tolerance {
    pub fn to_f64(&self) -> f64 {
        match self {
            Tolerance::Exact(r) => r.to_f64().unwrap(),
            Tolerance::SqrtOf(r) => r.to_f64().unwrap().max(0.0).sqrt(),
            Tolerance::FourthRootOf(r) => r.to_f64().unwrap().max(0.0).powf(0.25),
            Tolerance::Float(f) => *f,
        }
    }

    /// tol >= |x|, decided exactly for the rational-rooted forms.
    pub fn ge_abs(&self, x: &BigRational) -> bool {
        let a = x.abs();
        match self {
            Tolerance::Exact(r) => *r >= a,
            Tolerance::SqrtOf(r) => {
                if r < &BigRational::zero() {
                    return false;
                }
                *r >= a.clone() * a
            }
            Tolerance::FourthRootOf(r) => {
                if r < &BigRational::zero() {
                    return false;
                }
                let sq = a.clone() * a;
                *r >= sq.clone() * sq
            }
            Tolerance::Float(f) => a.to_f64().unwrap() <= *f,
        }
    }

    /// The tolerance multiplied by an integer factor.
    pub fn scaled(&self, factor: u32) -> Tolerance {
        let f = br_int(factor as i64);
        match self {
            Tolerance::Exact(r) => Tolerance::Exact(r.clone() * f),
            Tolerance::SqrtOf(r) => Tolerance::SqrtOf(r.clone() * f.clone() * f),
            Tolerance::FourthRootOf(r) => {
                let f2 = f.clone() * f;
                Tolerance::FourthRootOf(r.clone() * f2.clone() * f2)
            }
            Tolerance::Float(v) => Tolerance::Float(v * factor as f64),
        }
    }

    /// True iff the tolerance is >= 1 (the inequality it guards is vacuous).
    pub fn is_vacuous(&self) -> bool {
        self.ge_abs(&BigRational::one())
    }
}

/// Outcome of the fiber-ratio witness construction.
#[derive(Clone, Debug)]
pub struct EquidistributionWitness {
    pub tolerance: f64,
    /// Classes whose per-element ratio lies within 1 +- tolerance.
    pub included: Vec<bool>,
    pub element_count: u64,
    /// |S| >= (1 - tolerance) |Y|.
    pub verdict: bool,
    pub min_ratio: Option<BigRational>,
    pub max_ratio: Option<BigRational>,
}

/// S is the complement of the classes whose ratio deviates by more than the
/// tolerance; the per-class condition holds on S by construction, so the
/// verdict reduces to the size condition.
pub fn equidistribution_witness(fibers: &FiberTable, tol: &Tolerance) -> EquidistributionWitness {
    let k = fibers.counts.len();
    let mut included = vec![false; k];
    let mut element_count = 0u64;
    let mut min_ratio: Option<BigRational> = None;
    let mut max_ratio: Option<BigRational> = None;
    for c in 0..k {
        let ratio = fibers.ratio(c);
        let dev = ratio.clone() - BigRational::one();
        if tol.ge_abs(&dev) {
            included[c] = true;
            element_count += fibers.class_sizes[c];
            min_ratio = Some(match min_ratio {
                Some(m) => m.min(ratio.clone()),
                None => ratio.clone(),
            });
            max_ratio = Some(match max_ratio {
                Some(m) => m.max(ratio.clone()),
                None => ratio,
            });
        }
    }
    let order = fibers.group_order;
    let gap = BigRational::new(BigInt::from(order - element_count.min(order)), BigInt::from(order));
    let verdict = tol.ge_abs(&gap);
    EquidistributionWitness {
        tolerance: tol.to_f64(),
        included,
        element_count,
        verdict,
        min_ratio,
        max_ratio,
    }
}

/// Smallest tolerance at which the witness construction succeeds. The
/// verdict is monotone in the tolerance and the optimum is attained either
/// at a per-class deviation or at a size-gap value, so scanning those
/// candidates in order finds it exactly.
pub fn minimal_equidistribution_tolerance(fibers: &FiberTable) -> BigRational {
    let k = fibers.counts.len();
    let devs: Vec<BigRational> = (0..k)
        .map(|c| (fibers.ratio(c) - BigRational::one()).abs())
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| devs[a].cmp(&devs[b]));
    let total = fibers.group_order;
    let mut candidates: Vec<BigRational> = devs.clone();
    candidates.push(BigRational::one());
    let mut cum = 0u64;
    for &c in &order {
        cum += fibers.class_sizes[c];
        candidates.push(BigRational::new(BigInt::from(total - cum), BigInt::from(total)));
    }
    candidates.sort();
    candidates.dedup();
    for cand in candidates {
        if equidistribution_witness(fibers, &Tolerance::Exact(cand.clone())).verdict {
            return cand;
        }
    }
    unreachable!("the witness always succeeds once every class is admitted")
}

/// Measure-preservation comparison for one target subset.
#[derive(Clone, Debug)]
pub struct MeasureCheck {
    pub subset_size: u64,
    pub inverse_mass: BigRational,
    pub subset_fraction: BigRational,
    pub difference: BigRational,
    /// |difference| <= 3 * tolerance.
    pub within: bool,
}

/// |f^-1(Y0)|/|X| vs |Y0|/|Y| within 3 epsilon, from exact fiber counts.
pub fn measure_preservation_check(
    fibers: &FiberTable,
    classes: &ClassData,
    subset: &[u32],
    tol: &Tolerance,
) -> MeasureCheck {
    let mut preimage: u128 = 0;
    for &g in subset {
        preimage += fibers.counts[classes.class_of(g) as usize];
    }
    let inverse_mass = BigRational::new(BigInt::from(preimage), BigInt::from(fibers.domain_size()));
    let subset_fraction = br(subset.len() as i64, fibers.group_order as i64);
    let difference = inverse_mass.clone() - subset_fraction.clone();
    let within = tol.scaled(3).ge_abs(&difference);
    MeasureCheck {
        subset_size: subset.len() as u64,
        inverse_mass,
        subset_fraction,
        difference,
        within,
    }
}

/// Count of elements hit by the commutator map, against (1 - delta)|G|.
#[derive(Clone, Debug)]
pub struct CommutatorCount {
    pub count: u64,
    pub bound: f64,
    pub vacuous: bool,
    pub ok: bool,
}

pub fn commutator_count_check(fibers: &FiberTable, bounds: &DeviationBounds) -> CommutatorCount {
    let count = fibers.covered_elements();
    let order = fibers.group_order;
    let tol = Tolerance::SqrtOf(bounds.zeta2_minus_one.clone());
    let gap = BigRational::new(BigInt::from(order - count.min(order)), BigInt::from(order));
    CommutatorCount {
        count,
        bound: (1.0 - bounds.delta) * order as f64,
        vacuous: tol.is_vacuous(),
        ok: tol.ge_abs(&gap),
    }
}

/// Element type in the PSL(2,q) deviation formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorusKind {
    /// Order (q-1)/2 for odd q, q-1 for even q.
    Split,
    /// Order (q+1)/2 for odd q, q+1 for even q.
    NonSplit,
    /// Order p.
    Unipotent,
}

impl TorusKind {
    pub fn name(self) -> &'static str {
        match self {
            TorusKind::Split => "split",
            TorusKind::NonSplit => "nonsplit",
            TorusKind::Unipotent => "unipotent",
        }
    }
}

/// Closed-form commutator deviation Delta for PSL(2,q) element types.
pub fn psl2_delta_closed_form(q: u64, kind: TorusKind, exponent: u64) -> Result<BigRational> {
    if q < 4 {
        return Err(Error::InvalidParameter(format!(
            "closed-form deviations need q >= 4, got {q}"
        )));
    }
    let qi = q as i64;
    let even = q.is_multiple_of(2);
    Ok(match kind {
        TorusKind::Split => {
            let alpha = if even || q % 4 == 3 {
                -1
            } else if exponent.is_multiple_of(2) {
                2
            } else {
                -4
            };
            br(1, qi) + br(alpha, qi + 1)
        }
        TorusKind::NonSplit => {
            let beta = if even || q % 4 == 1 {
                1
            } else if exponent.is_multiple_of(2) {
                -2
            } else {
                4
            };
            br(-1, qi) + br(beta, qi - 1)
        }
        TorusKind::Unipotent => {
            if even {
                br(-3, 2 * (qi + 1)) + br(-1, 2 * (qi - 1))
            } else if q % 4 == 1 {
                br(1, 2 * (qi + 1))
            } else {
                br(-1, qi + 1) + br(-3, 2 * (qi - 1))
            }
        }
    })
}

/// One comparison row: closed-form vs table-derived deviation.
#[derive(Clone, Debug)]
pub struct Prop51Row {
    pub kind: TorusKind,
    pub exponent: u64,
    pub class: usize,
    pub closed_form: BigRational,
    pub table_delta: BigRational,
    pub matches: bool,
}

/// Closed-form deviations against table-derived ones, for every power of a
/// split and a nonsplit torus element and every unipotent class.
pub fn psl2_delta_report(
    group: &GroupHandle,
    classes: &ClassData,
    table: &CharacterTable,
) -> Result<Vec<Prop51Row>> {
    let (q, p) = match group.family() {
        Family::Psl2 { q, field } => (*q, field.characteristic()),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "{} is not a PSL2 group",
                group.descriptor()
            )))
        }
    };
    if q < 4 {
        return Err(Error::UnsupportedGroup(format!(
            "PSL2({q}) deviations: torus structure degenerates below q = 4"
        )));
    }
    let fibers = frobenius_fibers(table)?;
    let order = br_u128(table.group_order() as u128);
    let table_delta =
        |c: usize| br_u128(fibers.counts[c]) / order.clone() - BigRational::one();

    let half = if q % 2 == 0 { 1 } else { 2 };
    let split_order = ((q - 1) / half) as u32;
    let nonsplit_order = ((q + 1) / half) as u32;

    let class_with_order = |o: u32| -> Result<usize> {
        (0..classes.count())
            .find(|&c| classes.order(c) == o)
            .ok_or_else(|| Error::Internal(format!("no class of order {o} in PSL2({q})")))
    };

    let mut rows = Vec::new();
    let split_class = class_with_order(split_order)?;
    let a = classes.representative(split_class);
    for l in 1..split_order as u64 {
        let c = classes.class_of(group.pow(a, l)) as usize;
        let closed = psl2_delta_closed_form(q, TorusKind::Split, l)?;
        let td = table_delta(c);
        rows.push(Prop51Row {
            kind: TorusKind::Split,
            exponent: l,
            class: c,
            matches: closed == td,
            closed_form: closed,
            table_delta: td,
        });
    }
    let nonsplit_class = class_with_order(nonsplit_order)?;
    let b = classes.representative(nonsplit_class);
    for m in 1..nonsplit_order as u64 {
        let c = classes.class_of(group.pow(b, m)) as usize;
        let closed = psl2_delta_closed_form(q, TorusKind::NonSplit, m)?;
        let td = table_delta(c);
        rows.push(Prop51Row {
            kind: TorusKind::NonSplit,
            exponent: m,
            class: c,
            matches: closed == td,
            closed_form: closed,
            table_delta: td,
        });
    }
    // All order-p classes are unipotent (two for odd q, one for even q);
    // each is checked against the single printed value.
    for c in 0..classes.count() {
        if classes.order(c) as u64 == p {
            let closed = psl2_delta_closed_form(q, TorusKind::Unipotent, 1)?;
            let td = table_delta(c);
            rows.push(Prop51Row {
                kind: TorusKind::Unipotent,
                exponent: 1,
                class: c,
                matches: closed == td,
                closed_form: closed,
                table_delta: td,
            });
        }
    }
    Ok(rows)
}

/// One class row of the S_n character-bound check.
#[derive(Clone, Debug)]
pub struct SnBoundRow {
    pub class: usize,
    pub fixed_points: u32,
    pub skipped: bool,
    pub exponent_deficit: f64,
    pub violations: Vec<usize>,
}

/// |chi(g)| <= chi(1)^(1-delta) with delta from the fixed-point count,
/// natural logarithm, classes with 1 <= f < n only.
pub fn sn_character_bound_check(
    group: &GroupHandle,
    classes: &ClassData,
    table: &CharacterTable,
) -> Result<Vec<SnBoundRow>> {
    let n = match group.family() {
        Family::Symmetric(n) => *n,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "{} is not a symmetric group",
                group.descriptor()
            )))
        }
    };
    if !(5..=8).contains(&n) {
        return Err(Error::UnsupportedGroup(format!(
            "character bound check supports S5..S8, got S{n}"
        )));
    }
    let ln_n = (n as f64).ln();
    let mut rows = Vec::with_capacity(classes.count());
    for c in 0..classes.count() {
        let f = classes.fixed_points(group, c).expect("permutation family");
        if f < 1 || f as usize >= n {
            rows.push(SnBoundRow {
                class: c,
                fixed_points: f,
                skipped: true,
                exponent_deficit: 0.0,
                violations: Vec::new(),
            });
            continue;
        }
        let delta = 1.0 / ((1.0 - 1.0 / ln_n).recip() * 12.0 * ln_n / (n as f64 / f as f64).ln() + 18.0);
        let mut violations = Vec::new();
        for chi in 0..table.char_count() {
            let (re, im) = table.value_complex(chi, c);
            let abs = (re * re + im * im).sqrt();
            if abs > (table.degree(chi) as f64).powf(1.0 - delta) + 1e-9 {
                violations.push(chi);
            }
        }
        rows.push(SnBoundRow {
            class: c,
            fixed_points: f,
            skipped: false,
            exponent_deficit: delta,
            violations,
        });
    }
    Ok(rows)
}

/// Fixed-point tail: exact fraction of A_n elements with >= f fixed points
/// against the 2/f! bound.
#[derive(Clone, Debug)]
pub struct FixedPointTail {
    pub fixed_points: u32,
    pub bound: BigRational,
    pub exact_fraction: BigRational,
    pub ok: bool,
}

pub fn an_fixed_point_tail(group: &GroupHandle, classes: &ClassData, f: u32) -> Result<FixedPointTail> {
    let n = match group.family() {
        Family::Alternating(n) => *n,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "{} is not an alternating group",
                group.descriptor()
            )))
        }
    };
    if f < 1 || f as usize > n {
        return Err(Error::InvalidParameter(format!("need 1 <= f <= {n}, got {f}")));
    }
    let mut factorial = BigInt::one();
    for i in 1..=f as i64 {
        factorial *= BigInt::from(i);
    }
    let bound = BigRational::new(BigInt::from(2), factorial);
    let mut hits: u64 = 0;
    for c in 0..classes.count() {
        if classes.fixed_points(group, c).expect("permutation family") >= f {
            hits += classes.size(c);
        }
    }
    let exact = br(hits as i64, group.order() as i64);
    let ok = exact <= bound;
    Ok(FixedPointTail {
        fixed_points: f,
        bound,
        exact_fraction: exact,
        ok,
    })
}

/// Bound asserted on n^s (zeta-1) across alternating groups at s=2.
pub const AN_TREND_BOUND: f64 = 10.0;
/// Bound asserted on q (zeta(2)-1) across PSL2.
pub const PSL2_TREND_BOUND: f64 = 3.0;

#[derive(Clone, Debug)]
pub struct ZetaTrendRow {
    pub parameter: u64,
    pub zeta: f64,
    pub excess: f64,
    pub scaled: f64,
}

#[derive(Clone, Debug)]
pub struct ZetaTrend {
    pub rows: Vec<ZetaTrendRow>,
    pub monotone_decreasing: bool,
    pub max_scaled: f64,
}

/// Zeta trend across a family; `scale_exponent` is the power of the
/// parameter multiplying (zeta - 1) in the boundedness assertion.
pub fn zeta_trend(tables: &[(u64, &CharacterTable)], s: f64, scale_exponent: f64) -> ZetaTrend {
    let rows: Vec<ZetaTrendRow> = tables
        .iter()
        .map(|&(param, table)| {
            let z = witten_zeta(table, s);
            ZetaTrendRow {
                parameter: param,
                zeta: z,
                excess: z - 1.0,
                scaled: (param as f64).powf(scale_exponent) * (z - 1.0),
            }
        })
        .collect();
    let monotone_decreasing = rows.windows(2).all(|w| w[1].excess < w[0].excess);
    let max_scaled = rows.iter().map(|r| r.scaled).fold(f64::NEG_INFINITY, f64::max);
    ZetaTrend {
        rows,
        monotone_decreasing,
        max_scaled,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::build_character_table;
    use crate::group::classes::conjugacy_classes;

    fn table_for(desc: &str) -> (GroupHandle, ClassData, CharacterTable) {
        let g = GroupHandle::from_descriptor(desc).unwrap();
        let cd = conjugacy_classes(&g);
        let t = build_character_table(&g, &cd).unwrap();
        (g, cd, t)
    }

    #[test]
    fn zeta_values() {
        let (_, _, a5) = table_for("A5");
        let z = witten_zeta(&a5, 2.0);
        assert!((z - (1.0 + 2.0 / 9.0 + 1.0 / 16.0 + 1.0 / 25.0)).abs() < 1e-12);
        let (_, _, psl27) = table_for("PSL2(7)");
        let z7 = witten_zeta(&psl27, 2.0);
        assert!((z7 - (1.0 + 2.0 / 9.0 + 1.0 / 36.0 + 1.0 / 49.0 + 1.0 / 64.0)).abs() < 1e-12);
        // Abelian: all degrees 1, zeta(s) = |G| for every s.
        let (_, _, c6) = table_for("C6");
        assert!((witten_zeta(&c6, 2.0) - 6.0).abs() < 1e-12);
        assert!((witten_zeta(&c6, 7.5) - 6.0).abs() < 1e-12);
        // Monotone decreasing in s, approaching 1 as the nontrivial terms die.
        let mut prev = witten_zeta(&a5, 0.5);
        for s in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let z = witten_zeta(&a5, s);
            assert!(z <= prev);
            prev = z;
        }
        assert!((witten_zeta(&a5, 60.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_epsilon_values() {
        let (_, _, a5) = table_for("A5");
        let b = deviation_bounds(&a5);
        assert!((b.delta - 0.569844).abs() < 1e-6);
        assert!((b.epsilon - 0.754880).abs() < 1e-6);
        let (_, _, c6) = table_for("C6");
        let b6 = deviation_bounds(&c6);
        assert_eq!(b6.zeta2_minus_one, br_int(5));
    }

    #[test]
    fn psl27_commutator_fibers() {
        let (_, cd, t) = table_for("PSL2(7)");
        let fibers = frobenius_fibers(&t).unwrap();
        // N(1) = |G| k(G).
        assert_eq!(fibers.counts[0], 168 * 6);
        // Class of order 3: N = |G|(1 + 1/56) = 171.
        let c3 = (0..cd.count()).find(|&c| cd.order(c) == 3).unwrap();
        assert_eq!(fibers.counts[c3], 171);
        let mut sorted = fibers.counts.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![88, 105, 105, 171, 256, 1008]);
    }

    #[test]
    fn s3_transpositions_are_not_commutators() {
        let (_, cd, t) = table_for("S3");
        let fibers = frobenius_fibers(&t).unwrap();
        let c2 = (0..cd.count()).find(|&c| cd.order(c) == 2).unwrap();
        assert_eq!(fibers.counts[c2], 0);
        assert_eq!(fibers.counts[0], 18); // |G| k = 6*3
    }

    #[test]
    fn squares_fibers_examples() {
        let (_, _, c2) = table_for("C2");
        let f = squares_word_fibers(&c2).unwrap();
        assert_eq!(f.counts, vec![4, 0]);
        let (_, _, c3) = table_for("C3");
        let f3 = squares_word_fibers(&c3).unwrap();
        assert_eq!(f3.counts, vec![3, 3, 3]);
        // All A5 characters are real, so the x^2y^2 fibers coincide with the
        // commutator fibers.
        let (_, cd, a5) = table_for("A5");
        let fsq = squares_word_fibers(&a5).unwrap();
        let fcomm = frobenius_fibers(&a5).unwrap();
        assert_eq!(fsq.counts, fcomm.counts);
        let c5 = (0..cd.count()).find(|&c| cd.order(c) == 5).unwrap();
        assert_eq!(fsq.counts[c5], 65);
    }

    #[test]
    fn fourier_of_commutator_distribution() {
        let (_, _, t) = table_for("A5");
        let fibers = frobenius_fibers(&t).unwrap();
        let dist = Distribution::from_fibers(&fibers);
        dist.check_total().unwrap();
        for chi in 0..t.char_count() {
            let a = fourier_coefficient_exact(&dist, &t, chi);
            let expect = CycNum::from_rational(br(1, t.degree(chi) as i64));
            assert!(a.eq_value(&expect), "a_chi = 1/chi(1) fails at {chi}");
        }
        fourier_coefficients(&dist, &t).unwrap();
    }

    #[test]
    fn fourier_of_uniform_and_point_mass() {
        let (_, _, t) = table_for("S3");
        let uni = Distribution::uniform(t.class_sizes());
        let coeffs = fourier_coefficients(&uni, &t).unwrap();
        assert!((coeffs[0].0 - 1.0).abs() < 1e-12);
        for &(re, im) in &coeffs[1..] {
            assert!(re.abs() < 1e-12 && im.abs() < 1e-12);
        }
        let point = Distribution::point_mass_identity(t.class_sizes());
        for chi in 0..t.char_count() {
            let a = fourier_coefficient_exact(&point, &t, chi);
            assert!(a.eq_value(&CycNum::from_integer(t.degree(chi) as i64)));
        }
    }

    #[test]
    fn l1_examples() {
        let (_, _, t) = table_for("A5");
        let fibers = frobenius_fibers(&t).unwrap();
        let p = Distribution::from_fibers(&fibers);
        let u = Distribution::uniform(t.class_sizes());
        assert_eq!(l1_distance(&p, &p).unwrap(), BigRational::zero());
        // Point mass vs uniform on m elements: 2(1 - 1/m).
        let point = Distribution::point_mass_identity(t.class_sizes());
        assert_eq!(l1_distance(&point, &u).unwrap(), br(2 * 59, 60));
        // Commutator distribution obeys the zeta bound.
        let d = l1_distance(&p, &u).unwrap();
        let tol = Tolerance::SqrtOf(t.zeta2_minus_one());
        assert!(tol.ge_abs(&d));
    }

    #[test]
    fn witness_on_a5() {
        let (_, _, t) = table_for("A5");
        let fibers = frobenius_fibers(&t).unwrap();
        let tol = Tolerance::FourthRootOf(t.zeta2_minus_one());
        let w = equidistribution_witness(&fibers, &tol);
        assert!(w.verdict);
        assert!(!w.included[0]); // N(1)/|G| = k(G) = 5, far above 1 + eps
        assert_eq!(w.element_count, 59);
    }

    #[test]
    fn witness_trivial_cases() {
        let uniform = FiberTable::synthetic("x1", vec![1, 9], vec![10, 10]);
        let w = equidistribution_witness(&uniform, &Tolerance::Float(0.01));
        assert!(w.verdict);
        assert_eq!(w.element_count, 10);

        let point = FiberTable::synthetic("point", vec![1, 9], vec![100, 0]);
        let w2 = equidistribution_witness(&point, &Tolerance::Float(0.1));
        assert!(!w2.verdict);
    }

    #[test]
    fn measure_preservation_a5_five_cycles() {
        let (g, cd, t) = table_for("A5");
        let fibers = frobenius_fibers(&t).unwrap();
        let five_cycles: Vec<u32> = (0..g.order() as u32)
            .filter(|&x| g.element_order(x) == 5)
            .collect();
        assert_eq!(five_cycles.len(), 24);
        let tol = Tolerance::FourthRootOf(t.zeta2_minus_one());
        let mc = measure_preservation_check(&fibers, &cd, &five_cycles, &tol);
        assert_eq!(mc.inverse_mass, br(24 * 65, 3600));
        assert_eq!(mc.subset_fraction, br(24, 60));
        assert!(mc.within);
        // Y0 = G and Y0 = empty set are exact.
        let all: Vec<u32> = (0..60).collect();
        let mc_all = measure_preservation_check(&fibers, &cd, &all, &tol);
        assert_eq!(mc_all.inverse_mass, BigRational::one());
        assert_eq!(mc_all.difference, BigRational::zero());
        let mc_none = measure_preservation_check(&fibers, &cd, &[], &tol);
        assert_eq!(mc_none.inverse_mass, BigRational::zero());
    }

    #[test]
    fn commutator_counts() {
        let (_, _, a5) = table_for("A5");
        let f = frobenius_fibers(&a5).unwrap();
        let b = deviation_bounds(&a5);
        let cc = commutator_count_check(&f, &b);
        assert_eq!(cc.count, 60);
        assert!(cc.ok);
        assert!(!cc.vacuous);

        let (_, _, s3) = table_for("S3");
        let f3 = frobenius_fibers(&s3).unwrap();
        let b3 = deviation_bounds(&s3);
        let cc3 = commutator_count_check(&f3, &b3);
        assert_eq!(cc3.count, 3);
        assert!(cc3.vacuous); // delta(S3) >= 1
        assert!(cc3.ok);

        let (_, _, c1) = table_for("C1");
        let f1 = frobenius_fibers(&c1).unwrap();
        let cc1 = commutator_count_check(&f1, &deviation_bounds(&c1));
        assert_eq!(cc1.count, 1);
        assert!(cc1.ok);
    }

    #[test]
    fn prop51_printed_values() {
        assert_eq!(psl2_delta_closed_form(7, TorusKind::Split, 1).unwrap(), br(1, 56));
        assert_eq!(psl2_delta_closed_form(7, TorusKind::Unipotent, 1).unwrap(), br(-3, 8));
        assert_eq!(psl2_delta_closed_form(5, TorusKind::Unipotent, 1).unwrap(), br(1, 12));
        assert_eq!(psl2_delta_closed_form(4, TorusKind::NonSplit, 1).unwrap(), br(1, 12));
        assert_eq!(psl2_delta_closed_form(7, TorusKind::NonSplit, 1).unwrap(), br(11, 21));
        assert_eq!(psl2_delta_closed_form(7, TorusKind::NonSplit, 2).unwrap(), br(-10, 21));
        assert!(psl2_delta_closed_form(3, TorusKind::Split, 1).is_err());
    }

    #[test]
    fn prop51_report_q7() {
        let (g, cd, t) = table_for("PSL2(7)");
        let rows = psl2_delta_report(&g, &cd, &t).unwrap();
        assert!(rows.iter().all(|r| r.matches));
        let values: Vec<BigRational> = rows.iter().map(|r| r.closed_form.clone()).collect();
        for expect in [br(1, 56), br(-10, 21), br(11, 21), br(-3, 8)] {
            assert!(values.contains(&expect));
        }
    }

    #[test]
    fn fixed_point_tails() {
        let (g, cd, _) = table_for("A5");
        let tail = an_fixed_point_tail(&g, &cd, 5).unwrap();
        assert_eq!(tail.exact_fraction, br(1, 60));
        assert_eq!(tail.bound, br(2, 120));
        assert!(tail.ok);
        let vac = an_fixed_point_tail(&g, &cd, 1).unwrap();
        assert_eq!(vac.bound, br_int(2));
        assert!(vac.ok);

        let (g7, cd7, _) = table_for("A7");
        let t7 = an_fixed_point_tail(&g7, &cd7, 3).unwrap();
        assert!(t7.ok);
        assert_eq!(t7.bound, br(2, 6));
    }

    #[test]
    fn deviation_rows_bounded() {
        let (_, _, t) = table_for("PSL2(7)");
        let fibers = frobenius_fibers(&t).unwrap();
        let rows = deviation_report(&t, &fibers).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].delta, br_int(5)); // identity: k - 1
    }
}
