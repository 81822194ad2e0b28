//! Maps strategic-form elements to the game they define and decomposes the
//! entanglement axis into regions of constant game identity.
//!
//! Region boundaries are located by sign change of element differences plus
//! bisection — never by grid coincidence, since the crossings sit at values
//! the sample grid will not hit exactly.

use std::fmt;

use crate::closedform::{quad_entangled, quad_product, PayoffQuad};
use crate::equilibria::{
    certify, entangled_conditions, product_conditions, ConfigFamily, Method, ProfileName,
    StrategyProfile, DEFAULT_GRID, DEFAULT_NE_TOL,
};
use crate::error::{Error, Result};
use crate::game::{ClassicalPayoffMatrix, Measurement};

/// Minimum sample count for region reports.
pub const MIN_REPORT_SAMPLES: usize = 100;

/// Bisection width for element-crossing roots.
const ROOT_TOL: f64 = 1e-13;

/// Distinct roots closer than this are merged into one boundary point
/// (several element pairs can cross at the same parameter).
const ROOT_MERGE_TOL: f64 = 1e-9;

/// Strategic-form element labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    R,
    S,
    T,
    U,
}

impl Element {
    const ALL: [Element; 4] = [Element::R, Element::S, Element::T, Element::U];
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::R => write!(f, "R"),
            Element::S => write!(f, "S"),
            Element::T => write!(f, "T"),
            Element::U => write!(f, "U"),
        }
    }
}

/// Descending ordering of the four elements with equal values grouped,
/// e.g. `T>R=S>U`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderingSignature {
    groups: Vec<Vec<Element>>,
}

impl OrderingSignature {
    pub fn groups(&self) -> &[Vec<Element>] {
        &self.groups
    }

    fn of(pattern: &[&[Element]]) -> Self {
        Self {
            groups: pattern.iter().map(|g| g.to_vec()).collect(),
        }
    }
}

impl fmt::Display for OrderingSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (gi, group) in self.groups.iter().enumerate() {
            if gi > 0 {
                write!(f, ">")?;
            }
            for (ei, el) in group.iter().enumerate() {
                if ei > 0 {
                    write!(f, "=")?;
                }
                write!(f, "{el}")?;
            }
        }
        Ok(())
    }
}

/// Ordering-derived identity of a symmetric 2×2 game.
#[derive(Debug, Clone, PartialEq)]
pub enum GameClass {
    /// T > R > U > S: defection dominates but is not Pareto optimal.
    PrisonersDilemma,
    /// T > R > S > U: two asymmetric pure equilibria.
    Chicken,
    /// T > S > R > U.
    InvertedOrder,
    /// T > R = S > U: playing opposite to the opponent is advantageous.
    CompromiseDilemma,
    /// T > R > S = U.
    BoundarySU,
    /// Any other ordering; carries the full signature.
    Other(OrderingSignature),
}

impl GameClass {
    /// The element ordering this class stands for.
    pub fn signature(&self) -> OrderingSignature {
        use Element::{R, S, T, U};
        match self {
            GameClass::PrisonersDilemma => OrderingSignature::of(&[&[T], &[R], &[U], &[S]]),
            GameClass::Chicken => OrderingSignature::of(&[&[T], &[R], &[S], &[U]]),
            GameClass::InvertedOrder => OrderingSignature::of(&[&[T], &[S], &[R], &[U]]),
            GameClass::CompromiseDilemma => OrderingSignature::of(&[&[T], &[R, S], &[U]]),
            GameClass::BoundarySU => OrderingSignature::of(&[&[T], &[R], &[S, U]]),
            GameClass::Other(sig) => sig.clone(),
        }
    }
}

impl fmt::Display for GameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameClass::PrisonersDilemma => write!(f, "PrisonersDilemma"),
            GameClass::Chicken => write!(f, "Chicken"),
            GameClass::InvertedOrder => write!(f, "InvertedOrder"),
            GameClass::CompromiseDilemma => write!(f, "CompromiseDilemma"),
            GameClass::BoundarySU => write!(f, "BoundarySU"),
            GameClass::Other(sig) => write!(f, "Other({sig})"),
        }
    }
}

/// Group the elements of a quad in descending order, merging values that lie
/// within `eps` of the group leader. Labels inside a group sort
/// alphabetically so the signature is canonical.
pub fn ordering_signature(quad: &PayoffQuad, eps: f64) -> OrderingSignature {
    let values = quad.elements();
    let mut items: Vec<(Element, f64)> = Element::ALL.iter().copied().zip(values).collect();
    items.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut groups: Vec<Vec<Element>> = vec![vec![items[0].0]];
    let mut leader = items[0].1;
    for &(el, v) in &items[1..] {
        if (leader - v).abs() <= eps {
            groups.last_mut().expect("nonempty").push(el);
        } else {
            groups.push(vec![el]);
            leader = v;
        }
    }
    for group in &mut groups {
        group.sort();
    }
    OrderingSignature { groups }
}

/// Classify a quad by its element ordering; `eps` is the equality tolerance
/// in absolute payoff units.
pub fn classify_quad(quad: &PayoffQuad, eps: f64) -> GameClass {
    use Element::{R, S, T, U};
    let sig = ordering_signature(quad, eps);
    if sig == OrderingSignature::of(&[&[T], &[R], &[U], &[S]]) {
        GameClass::PrisonersDilemma
    } else if sig == OrderingSignature::of(&[&[T], &[R], &[S], &[U]]) {
        GameClass::Chicken
    } else if sig == OrderingSignature::of(&[&[T], &[S], &[R], &[U]]) {
        GameClass::InvertedOrder
    } else if sig == OrderingSignature::of(&[&[T], &[R, S], &[U]]) {
        GameClass::CompromiseDilemma
    } else if sig == OrderingSignature::of(&[&[T], &[R], &[S, U]]) {
        GameClass::BoundarySU
    } else {
        GameClass::Other(sig)
    }
}

/// One open interval of the sweep domain with a constant game identity.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionInterval {
    pub lo: f64,
    pub hi: f64,
    pub class: GameClass,
    pub ne: Vec<ProfileName>,
    pub source: Method,
}

/// An equilibrium at a boundary point together with its strictness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryNe {
    pub profile: ProfileName,
    pub strict: bool,
}

/// A parameter value where two or more elements coincide.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint {
    pub param: f64,
    pub quad: PayoffQuad,
    pub class: GameClass,
    pub ne: Vec<BoundaryNe>,
    pub source: Method,
    /// False for domain endpoints that happen to be degenerate.
    pub interior: bool,
}

/// Decomposition of a sweep domain into intervals and boundary points.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionReport {
    pub intervals: Vec<RegionInterval>,
    pub boundaries: Vec<BoundaryPoint>,
}

impl RegionReport {
    pub fn interior_boundaries(&self) -> impl Iterator<Item = &BoundaryPoint> {
        self.boundaries.iter().filter(|b| b.interior)
    }

    /// Number of distinct element orderings across all intervals and
    /// boundary points.
    pub fn distinct_games(&self) -> usize {
        let mut signatures: Vec<OrderingSignature> = Vec::new();
        let classes = self
            .intervals
            .iter()
            .map(|iv| &iv.class)
            .chain(self.boundaries.iter().map(|b| &b.class));
        for class in classes {
            let sig = class.signature();
            if !signatures.contains(&sig) {
                signatures.push(sig);
            }
        }
        signatures.len()
    }
}

/// Convert the sweep parameter to the entanglement angle: sin ξ for the
/// entangled basis, sin²(ξ/2) for the product basis.
fn xi_of_param(measurement: Measurement, p: f64) -> f64 {
    match measurement {
        Measurement::Entangled => p.asin(),
        Measurement::Product => 2.0 * p.sqrt().asin(),
        Measurement::General(_) => unreachable!("sweeps reject general measurement"),
    }
}

fn quad_for(measurement: Measurement, p: f64) -> PayoffQuad {
    let xi = xi_of_param(measurement, p);
    match measurement {
        Measurement::Entangled => quad_entangled(xi).expect("parameter stays in [0, 1]"),
        Measurement::Product => quad_product(xi).expect("parameter stays in [0, 1]"),
        Measurement::General(_) => unreachable!(),
    }
}

fn analytic_ne(measurement: Measurement, p: f64) -> Vec<ProfileName> {
    let xi = xi_of_param(measurement, p);
    match measurement {
        Measurement::Entangled => entangled_conditions(xi),
        Measurement::Product => product_conditions(xi),
        Measurement::General(_) => unreachable!(),
    }
}

fn bisect_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= ROOT_TOL {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// All parameter values in (0, 1) where some pair of elements crosses.
fn element_crossings(measurement: Measurement, samples: usize) -> Vec<f64> {
    let steps = (samples - 1) as f64;
    let param = |k: usize| k as f64 / steps;
    let mut roots: Vec<f64> = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let diff = |p: f64| {
                let e = quad_for(measurement, p).elements();
                e[i] - e[j]
            };
            for k in 0..samples - 1 {
                let (pa, pb) = (param(k), param(k + 1));
                let (da, db) = (diff(pa), diff(pb));
                if da == 0.0 && k > 0 {
                    roots.push(pa);
                } else if da * db < 0.0 {
                    roots.push(bisect_root(diff, pa, pb));
                }
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    let mut merged: Vec<f64> = Vec::new();
    for r in roots {
        if r <= ROOT_MERGE_TOL || r >= 1.0 - ROOT_MERGE_TOL {
            continue; // endpoints are handled separately
        }
        match merged.last() {
            Some(&last) if (r - last).abs() <= ROOT_MERGE_TOL => {}
            _ => merged.push(r),
        }
    }
    merged
}

/// True when some element pair of the quad is degenerate within `eps`.
fn has_degeneracy(quad: &PayoffQuad, eps: f64) -> bool {
    let e = quad.elements();
    for i in 0..4 {
        for j in (i + 1)..4 {
            if (e[i] - e[j]).abs() <= eps {
                return true;
            }
        }
    }
    false
}

fn boundary_point(
    measurement: Measurement,
    family: &ConfigFamily,
    p: f64,
    eps: f64,
    interior: bool,
) -> Result<BoundaryPoint> {
    let quad = quad_for(measurement, p);
    let xi = xi_of_param(measurement, p);
    let mut ne = Vec::new();
    for name in analytic_ne(measurement, p) {
        let cert = certify(
            &family.config_at(xi)?,
            &StrategyProfile::named(name),
            DEFAULT_GRID,
            DEFAULT_NE_TOL,
        )?;
        ne.push(BoundaryNe {
            profile: name,
            strict: cert.is_strict,
        });
    }
    Ok(BoundaryPoint {
        param: p,
        class: classify_quad(&quad, eps),
        quad,
        ne,
        source: Method::Analytic,
        interior,
    })
}

fn region_report(measurement: Measurement, samples: usize, eps: f64) -> Result<RegionReport> {
    if samples < MIN_REPORT_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_REPORT_SAMPLES,
            got: samples,
        });
    }
    let family = ConfigFamily::new(measurement.delta(), ClassicalPayoffMatrix::default());
    let crossings = element_crossings(measurement, samples);

    let mut boundaries = Vec::new();
    for &endpoint in &[0.0, 1.0] {
        if has_degeneracy(&quad_for(measurement, endpoint), eps) {
            boundaries.push(boundary_point(measurement, &family, endpoint, eps, false)?);
        }
    }
    for &p in &crossings {
        boundaries.push(boundary_point(measurement, &family, p, eps, true)?);
    }
    boundaries.sort_by(|a, b| a.param.total_cmp(&b.param));

    let mut breakpoints = vec![0.0];
    breakpoints.extend(crossings.iter().copied());
    breakpoints.push(1.0);

    let mut intervals = Vec::new();
    for pair in breakpoints.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let mid = 0.5 * (lo + hi);
        intervals.push(RegionInterval {
            lo,
            hi,
            class: classify_quad(&quad_for(measurement, mid), eps),
            ne: analytic_ne(measurement, mid),
            source: Method::Analytic,
        });
    }

    Ok(RegionReport {
        intervals,
        boundaries,
    })
}

/// Region decomposition over sin ξ ∈ [0, 1] under entangled measurement.
pub fn region_report_entangled(samples: usize, eps: f64) -> Result<RegionReport> {
    region_report(Measurement::Entangled, samples, eps)
}

/// Region decomposition over sin²(ξ/2) ∈ [0, 1] under product measurement.
pub fn region_report_product(samples: usize, eps: f64) -> Result<RegionReport> {
    region_report(Measurement::Product, samples, eps)
}

/// Evenly spaced samples of the effective strategic-form elements, keyed by
/// the measurement's natural sweep parameter. Arbitrary-matrix variant.
pub fn sweep_quads_with(
    m: &ClassicalPayoffMatrix,
    measurement: Measurement,
    samples: usize,
) -> Result<Vec<(f64, PayoffQuad)>> {
    if samples < 2 {
        return Err(Error::TooFewSamples {
            min: 2,
            got: samples,
        });
    }
    if matches!(measurement, Measurement::General(_)) {
        return Err(Error::GeneralMeasurementSweep);
    }
    let steps = (samples - 1) as f64;
    let mut rows = Vec::with_capacity(samples);
    for k in 0..samples {
        let p = k as f64 / steps;
        let xi = xi_of_param(measurement, p);
        let quad = match measurement {
            Measurement::Entangled => crate::closedform::quad_entangled_with(m, xi)?,
            Measurement::Product => crate::closedform::quad_product_with(m, xi)?,
            Measurement::General(_) => unreachable!(),
        };
        rows.push((p, quad));
    }
    Ok(rows)
}

/// Evenly spaced samples of the canonical-matrix elements for figure data.
pub fn sweep_quads(measurement: Measurement, samples: usize) -> Result<Vec<(f64, PayoffQuad)>> {
    sweep_quads_with(&ClassicalPayoffMatrix::DEFAULT, measurement, samples)
}
