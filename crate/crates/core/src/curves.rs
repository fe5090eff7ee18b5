//! Weierstrass curves over small finite fields and brute-force point counts.
//!
//! Curves use the long form
//! `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6`, so that characteristic
//! 2 and 3 are covered. Two exact counters are provided:
//!
//! * [`count_points_naive`] tests every pair `(x, y)`; it is `O(q^2)` and is
//!   the reference.
//! * [`PointCounter`] tabulates, once per field, how many `y` solve
//!   `y^2 = t` and `z^2 + z = t`, then counts a curve with one lookup per
//!   `x`. This is what makes counting over `GF(2^16)` affordable.
//!
//! Trace realization walks a fixed family of models per characteristic in
//! lexicographic order and returns the first curve with the requested trace.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{domain, resource, Error, Result};
use crate::finitefield::{embed_field, FieldContext, FieldElement, FieldEmbedding};
use crate::traces::{hasse_holds, PrimePower};

/// Largest field for which [`count_points_naive`] will run.
pub const NAIVE_COUNT_LIMIT: u64 = 1 << 12;

/// Largest `q` for which [`realize_trace`] enumerates curve families.
pub const REALIZE_LIMIT: u64 = 128;

/// Default bound on `q^n` for [`base_change_count`].
pub const BASE_CHANGE_LIMIT: u64 = 1 << 16;

/// Coefficient order: `[a1, a2, a3, a4, a6]`.
type RawCoeffs = [u32; 5];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    field: Arc<FieldContext>,
    coeffs: [FieldElement; 5],
}

impl WeierstrassCurve {
    /// Builds `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6`; singular
    /// equations are rejected.
    pub fn new(field: Arc<FieldContext>, coeffs: [FieldElement; 5]) -> Result<Self> {
        let delta = discriminant(&field, &coeffs)?;
        if delta == field.zero() {
            return Err(domain(format!(
                "singular curve {} (discriminant 0)",
                render_coeffs(&field, &coeffs)
            )));
        }
        Ok(WeierstrassCurve { field, coeffs })
    }

    /// `y^2 = x^3 + A x + B`.
    pub fn short(field: Arc<FieldContext>, a: FieldElement, b: FieldElement) -> Result<Self> {
        let zero = field.zero();
        Self::new(field, [zero, zero, zero, a, b])
    }

    fn from_raw(field: Arc<FieldContext>, raw: RawCoeffs) -> Self {
        let coeffs = raw.map(|c| field.wrap(c));
        WeierstrassCurve { field, coeffs }
    }

    fn raw(&self) -> RawCoeffs {
        self.coeffs.map(|c| c.index())
    }

    pub fn field(&self) -> &Arc<FieldContext> {
        &self.field
    }

    pub fn coefficients(&self) -> [FieldElement; 5] {
        self.coeffs
    }

    pub fn discriminant(&self) -> FieldElement {
        self.field.wrap(discriminant_raw(&self.field, &self.raw()))
    }

    /// `true` when the curve lies in a family with `a1 = a2 = a3 = 0`.
    pub fn is_short_form(&self) -> bool {
        let z = self.field.zero();
        self.coeffs[..3].iter().all(|&c| c == z)
    }
}

impl fmt::Display for WeierstrassCurve {
    /// `[a1,a2,a3,a4,a6] over GF(p^b) mod <modulus>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_coeffs(&self.field, &self.coeffs))
    }
}

fn render_coeffs(field: &FieldContext, coeffs: &[FieldElement; 5]) -> String {
    let parts: Vec<String> = coeffs.iter().map(|&c| field.render(c)).collect();
    format!(
        "[{}] over GF({}^{}) mod {}",
        parts.join(","),
        field.characteristic(),
        field.degree(),
        field.render_modulus()
    )
}

/// `Delta = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6`.
pub fn discriminant(field: &FieldContext, coeffs: &[FieldElement; 5]) -> Result<FieldElement> {
    if let Some(c) = coeffs.iter().find(|c| !field.contains(**c)) {
        return Err(domain(format!(
            "curve coefficient from GF({}) used over GF({})",
            c.field_order(),
            field.order()
        )));
    }
    Ok(field.wrap(discriminant_raw(field, &coeffs.map(|c| c.index()))))
}

fn discriminant_raw(f: &FieldContext, c: &RawCoeffs) -> u32 {
    let [a1, a2, a3, a4, a6] = *c;
    let k = |n: i64| f.from_int(n).index();
    let mul = |x, y| f.mul_raw(x, y);
    let add = |x, y| f.add_raw(x, y);
    let sub = |x, y| f.sub_raw(x, y);

    let a1a1 = mul(a1, a1);
    let b2 = add(a1a1, mul(k(4), a2));
    let b4 = add(mul(k(2), a4), mul(a1, a3));
    let b6 = add(mul(a3, a3), mul(k(4), a6));
    let b8 = sub(
        add(
            add(mul(a1a1, a6), mul(k(4), mul(a2, a6))),
            mul(a2, mul(a3, a3)),
        ),
        add(mul(a1, mul(a3, a4)), mul(a4, a4)),
    );
    let t1 = mul(mul(b2, b2), b8);
    let t2 = mul(k(8), mul(b4, mul(b4, b4)));
    let t3 = mul(k(27), mul(b6, b6));
    let t4 = mul(k(9), mul(b2, mul(b4, b6)));
    sub(t4, add(add(t1, t2), t3))
}

/// A curve with its number of rational points (including infinity) and its
/// Frobenius trace `q + 1 - N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveCount {
    pub curve: WeierstrassCurve,
    pub points: u64,
    pub trace: i64,
}

impl CurveCount {
    fn new(curve: &WeierstrassCurve, points: u64) -> Self {
        let q = i64::from(curve.field.order());
        CurveCount {
            curve: curve.clone(),
            points,
            trace: q + 1 - points as i64,
        }
    }
}

/// Counts points by testing every `(x, y)` in `F_q^2`.
pub fn count_points_naive(curve: &WeierstrassCurve) -> Result<CurveCount> {
    let f = &curve.field;
    if u64::from(f.order()) > NAIVE_COUNT_LIMIT {
        return Err(resource(format!(
            "naive count over GF({}) exceeds the limit {NAIVE_COUNT_LIMIT}",
            f.order()
        )));
    }
    let [a1, a2, a3, a4, a6] = curve.raw();
    let mut points = 1u64;
    for x in 0..f.order() {
        let x2 = f.mul_raw(x, x);
        let rhs = f.add_raw(
            f.add_raw(f.mul_raw(x2, x), f.mul_raw(a2, x2)),
            f.add_raw(f.mul_raw(a4, x), a6),
        );
        let linear = f.add_raw(f.mul_raw(a1, x), a3);
        for y in 0..f.order() {
            let lhs = f.add_raw(f.mul_raw(y, y), f.mul_raw(linear, y));
            if lhs == rhs {
                points += 1;
            }
        }
    }
    Ok(CurveCount::new(curve, points))
}

/// Per-field tables for counting points with one lookup per `x`.
///
/// For fixed `x` the curve equation reads `y^2 + c y = t` with
/// `c = a1 x + a3`. In odd characteristic this has as many solutions as
/// `w^2 = c^2 + 4t`. In characteristic 2 it has one solution when `c = 0`,
/// and otherwise as many as `z^2 + z = t / c^2`.
#[derive(Debug, Clone)]
pub struct PointCounter {
    field: Arc<FieldContext>,
    /// `#{y : y^2 = t}` (odd characteristic).
    square_roots: Vec<u8>,
    /// `#{z : z^2 + z = t}` (characteristic 2).
    artin_schreier: Vec<u8>,
    /// Multiplicative inverses, 0 at 0 (characteristic 2).
    inverses: Vec<u32>,
}

impl PointCounter {
    pub fn new(field: Arc<FieldContext>) -> Self {
        let q = field.order() as usize;
        let (mut square_roots, mut artin_schreier, mut inverses) =
            (Vec::new(), Vec::new(), Vec::new());
        if field.characteristic() == 2 {
            artin_schreier = vec![0u8; q];
            inverses = vec![0u32; q];
            for z in 0..field.order() {
                artin_schreier[field.add_raw(field.mul_raw(z, z), z) as usize] += 1;
                if z != 0 && inverses[z as usize] == 0 {
                    let inv = field.inv_raw(z);
                    inverses[z as usize] = inv;
                    inverses[inv as usize] = z;
                }
            }
        } else {
            square_roots = vec![0u8; q];
            for y in 0..field.order() {
                square_roots[field.mul_raw(y, y) as usize] += 1;
            }
        }
        PointCounter {
            field,
            square_roots,
            artin_schreier,
            inverses,
        }
    }

    pub fn field(&self) -> &Arc<FieldContext> {
        &self.field
    }

    pub fn count(&self, curve: &WeierstrassCurve) -> Result<CurveCount> {
        if curve.field.order() != self.field.order() {
            return Err(domain(format!(
                "curve over GF({}) given to a counter for GF({})",
                curve.field.order(),
                self.field.order()
            )));
        }
        Ok(CurveCount::new(curve, self.count_raw(&curve.raw())))
    }

    pub(crate) fn count_raw(&self, coeffs: &RawCoeffs) -> u64 {
        let f = &*self.field;
        let [a1, a2, a3, a4, a6] = *coeffs;
        let four = f.from_int(4).index();
        let char2 = f.characteristic() == 2;
        let mut points = 1u64;
        for x in 0..f.order() {
            let x2 = f.mul_raw(x, x);
            let rhs = f.add_raw(
                f.add_raw(f.mul_raw(x2, x), f.mul_raw(a2, x2)),
                f.add_raw(f.mul_raw(a4, x), a6),
            );
            let c = f.add_raw(f.mul_raw(a1, x), a3);
            points += if char2 {
                if c == 0 {
                    1
                } else {
                    let ic = self.inverses[c as usize];
                    let t = f.mul_raw(rhs, f.mul_raw(ic, ic));
                    u64::from(self.artin_schreier[t as usize])
                }
            } else {
                let d = f.add_raw(f.mul_raw(c, c), f.mul_raw(four, rhs));
                u64::from(self.square_roots[d as usize])
            };
        }
        points
    }
}

/// Counts points with a freshly built [`PointCounter`].
pub fn count_points(curve: &WeierstrassCurve) -> CurveCount {
    let counter = PointCounter::new(curve.field.clone());
    CurveCount::new(curve, counter.count_raw(&curve.raw()))
}

/// Candidate models in search order:
///
/// * `p > 3`: `y^2 = x^3 + A x + B`, `(A, B)` lexicographic;
/// * `p = 3`: `y^2 = x^3 + a2 x^2 + a4 x + a6`, `(a2, a4, a6)` lexicographic;
/// * `p = 2`: `y^2 + x y = x^3 + a2 x^2 + a6` over `(a2, a6)`, then
///   `y^2 + a3 y = x^3 + a4 x + a6` over `(a3, a4, a6)`.
///
/// Singular members are included; callers skip them.
fn candidate_models(field: &FieldContext) -> Box<dyn Iterator<Item = RawCoeffs> + '_> {
    let q = field.order();
    match field.characteristic() {
        2 => {
            let ordinary = (0..q).flat_map(move |a2| (0..q).map(move |a6| [1, a2, 0, 0, a6]));
            let supersingular = (0..q).flat_map(move |a3| {
                (0..q).flat_map(move |a4| (0..q).map(move |a6| [0, 0, a3, a4, a6]))
            });
            Box::new(ordinary.chain(supersingular))
        }
        3 => Box::new((0..q).flat_map(move |a2| {
            (0..q).flat_map(move |a4| (0..q).map(move |a6| [0, a2, 0, a4, a6]))
        })),
        _ => Box::new((0..q).flat_map(move |a| (0..q).map(move |b| [0, 0, 0, a, b]))),
    }
}

/// Nonsingular members of the search family for `field`, in search order.
pub fn family_curves(field: Arc<FieldContext>) -> impl Iterator<Item = WeierstrassCurve> {
    let models: Vec<RawCoeffs> = candidate_models(&field)
        .filter(|c| discriminant_raw(&field, c) != 0)
        .collect();
    models
        .into_iter()
        .map(move |c| WeierstrassCurve::from_raw(field.clone(), c))
}

fn realization_field(q: &PrimePower, limit: u64) -> Result<Arc<FieldContext>> {
    if q.q() > limit {
        return Err(resource(format!(
            "trace realization over GF({}) exceeds the limit {limit}",
            q.q()
        )));
    }
    Ok(Arc::new(FieldContext::new(q.p(), q.b())?))
}

/// The first curve of the search family whose trace is `a`, if any.
pub fn realize_trace(q: &PrimePower, a: i64) -> Result<Option<WeierstrassCurve>> {
    realize_trace_with_limit(q, a, REALIZE_LIMIT)
}

pub fn realize_trace_with_limit(
    q: &PrimePower,
    a: i64,
    limit: u64,
) -> Result<Option<WeierstrassCurve>> {
    if !hasse_holds(q, a) {
        return Err(domain(format!(
            "trace {a} violates the Hasse bound for q = {q}"
        )));
    }
    let field = realization_field(q, limit)?;
    let counter = PointCounter::new(field.clone());
    let target = (q.q() as i64 + 1 - a) as u64;
    let found = candidate_models(&field)
        .filter(|c| discriminant_raw(&field, c) != 0)
        .find(|c| counter.count_raw(c) == target);
    Ok(found.map(|c| WeierstrassCurve::from_raw(field.clone(), c)))
}

/// One pass over the search family recording the first curve for every
/// trace that occurs. Agrees with [`realize_trace`] trace by trace.
pub fn first_curves_by_trace(q: &PrimePower) -> Result<BTreeMap<i64, WeierstrassCurve>> {
    let field = realization_field(q, REALIZE_LIMIT)?;
    let counter = PointCounter::new(field.clone());
    let mut first = BTreeMap::new();
    for c in candidate_models(&field).filter(|c| discriminant_raw(&field, c) != 0) {
        let trace = q.q() as i64 + 1 - counter.count_raw(&c) as i64;
        first
            .entry(trace)
            .or_insert_with(|| WeierstrassCurve::from_raw(field.clone(), c));
    }
    Ok(first)
}

/// Moves curves from `GF(q)` to `GF(q^n)` and counts them there.
#[derive(Debug, Clone)]
pub struct BaseChange {
    small_order: u32,
    degree: u32,
    embedding: FieldEmbedding,
    counter: PointCounter,
}

impl BaseChange {
    pub fn new(small: &FieldContext, n: u32) -> Result<Self> {
        Self::with_limit(small, n, BASE_CHANGE_LIMIT)
    }

    pub fn with_limit(small: &FieldContext, n: u32, limit: u64) -> Result<Self> {
        if n == 0 {
            return Err(domain("extension degree must be positive"));
        }
        let q = u64::from(small.order());
        match q.checked_pow(n) {
            Some(qn) if qn <= limit => {}
            _ => {
                return Err(resource(format!(
                    "GF({q}^{n}) exceeds the base-change limit {limit}"
                )))
            }
        }
        let big = Arc::new(FieldContext::new(
            u64::from(small.characteristic()),
            small.degree() * n,
        )?);
        let embedding = embed_field(small, big.clone())?;
        Ok(BaseChange {
            small_order: small.order(),
            degree: n,
            embedding,
            counter: PointCounter::new(big),
        })
    }

    pub fn extension(&self) -> &Arc<FieldContext> {
        self.embedding.big()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The same equation read over the extension field.
    pub fn lift(&self, curve: &WeierstrassCurve) -> Result<WeierstrassCurve> {
        if curve.field.order() != self.small_order {
            return Err(domain(format!(
                "curve over GF({}) given to a base change from GF({})",
                curve.field.order(),
                self.small_order
            )));
        }
        let coeffs = curve.raw().map(|c| self.embedding.map_raw(c));
        let lifted = WeierstrassCurve::from_raw(self.embedding.big().clone(), coeffs);
        if lifted.discriminant() == lifted.field.zero() {
            return Err(Error::Internal(format!(
                "base change of {curve} became singular"
            )));
        }
        Ok(lifted)
    }

    /// `#E(F_{q^n})`.
    pub fn count(&self, curve: &WeierstrassCurve) -> Result<u64> {
        let lifted = self.lift(curve)?;
        Ok(self.counter.count_raw(&lifted.raw()))
    }
}

/// `#E(F_{q^n})` for a curve over `F_q`, by counting over the extension.
pub fn base_change_count(curve: &WeierstrassCurve, n: u32) -> Result<u64> {
    BaseChange::new(&curve.field, n)?.count(curve)
}
