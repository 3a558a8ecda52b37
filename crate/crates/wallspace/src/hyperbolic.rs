//! The measured wallspace of geodesics of the hyperbolic plane.
//!
//! Geodesics are parametrized by their ideal endpoint angles; the invariant
//! density is c . dalpha dbeta / (4 sin^2((alpha-beta)/2)), with c fixed by
//! numeric calibration so that the crossing measure of a unit segment is 1
//! (the Crofton identity # = d then holds for every pair). Geometry runs in
//! the Minkowski hyperboloid model where distances, sides, and angles are
//! closed forms.

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use rand::Rng;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// A point of the hyperbolic plane in the unit-disk model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Self {
        assert!(x * x + y * y < 1.0 - 1e-12, "point must lie inside the disk");
        HPoint { x, y }
    }

    fn mink(&self) -> [f64; 3] {
        let r2 = self.x * self.x + self.y * self.y;
        let d = 1.0 - r2;
        [(1.0 + r2) / d, 2.0 * self.x / d, 2.0 * self.y / d]
    }

    fn from_mink(v: [f64; 3]) -> Self {
        HPoint { x: v[1] / (1.0 + v[0]), y: v[2] / (1.0 + v[0]) }
    }
}

/// A complete geodesic, by its ideal endpoint angles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HGeodesic {
    pub alpha: f64,
    pub beta: f64,
}

impl HGeodesic {
    pub fn new(alpha: f64, beta: f64) -> Self {
        let a = alpha.rem_euclid(TAU);
        let b = beta.rem_euclid(TAU);
        assert!(
            angle_gap(a, b) > 1e-10,
            "endpoints must be distinct"
        );
        HGeodesic { alpha: a, beta: b }
    }

    /// Unit spacelike normal; the side of a point is the sign of <P, n>.
    fn normal(&self) -> [f64; 3] {
        let a = null_vec(self.alpha);
        let b = null_vec(self.beta);
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        // lower the index for the (+,-,-) form
        let v = [cross[0], -cross[1], -cross[2]];
        let s = mdot(v, v);
        debug_assert!(s < 0.0);
        let norm = (-s).sqrt();
        [v[0] / norm, v[1] / norm, v[2] / norm]
    }

    /// Timelike base point (closest point to the endpoint-angle bisector) and
    /// spacelike unit tangent, giving the arclength parametrization
    /// gamma(s) = B cosh s + T sinh s.
    fn frame(&self) -> ([f64; 3], [f64; 3]) {
        let a = null_vec(self.alpha);
        let b = null_vec(self.beta);
        let sum = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
        let bs = mdot(sum, sum).sqrt();
        let base = [sum[0] / bs, sum[1] / bs, sum[2] / bs];
        let diff = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let ds = (-mdot(diff, diff)).sqrt();
        let tangent = [diff[0] / ds, diff[1] / ds, diff[2] / ds];
        (base, tangent)
    }

    pub fn point_at(&self, s: f64) -> HPoint {
        let (b, t) = self.frame();
        let (ch, sh) = (s.cosh(), s.sinh());
        HPoint::from_mink([
            b[0] * ch + t[0] * sh,
            b[1] * ch + t[1] * sh,
            b[2] * ch + t[2] * sh,
        ])
    }

    /// Arclength coordinate of a point lying on the geodesic.
    pub fn param_of(&self, p: &HPoint) -> f64 {
        let (_, t) = self.frame();
        (-mdot(p.mink(), t)).asinh()
    }
}

fn null_vec(theta: f64) -> [f64; 3] {
    [1.0, theta.cos(), theta.sin()]
}

fn mdot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2]
}

/// Shorter circular distance between two angles.
fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

pub fn hyperbolic_distance(p: &HPoint, q: &HPoint) -> f64 {
    mdot(p.mink(), q.mink()).max(1.0).acosh()
}

/// Distance between disjoint geodesics (0 if they cross).
pub fn geodesic_distance(a: &HGeodesic, b: &HGeodesic) -> f64 {
    let t = mdot(a.normal(), b.normal()).abs();
    if t <= 1.0 {
        0.0
    } else {
        t.acosh()
    }
}

/// An orientation-preserving isometry as a Minkowski matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    m: [[f64; 3]; 3],
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// Rotation about the disk origin.
    pub fn rotation(phi: f64) -> Self {
        let (c, s) = (phi.cos(), phi.sin());
        Isometry { m: [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]] }
    }

    /// Translation by `s` along the x-axis geodesic.
    pub fn boost(s: f64) -> Self {
        let (c, h) = (s.cosh(), s.sinh());
        Isometry { m: [[c, h, 0.0], [h, c, 0.0], [0.0, 0.0, 1.0]] }
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Isometry { m }
    }

    fn apply_vec(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|k| self.m[i][k] * v[k]).sum();
        }
        out
    }

    pub fn apply(&self, p: &HPoint) -> HPoint {
        HPoint::from_mink(self.apply_vec(p.mink()))
    }

    pub fn apply_angle(&self, theta: f64) -> f64 {
        let v = self.apply_vec(null_vec(theta));
        v[2].atan2(v[1]).rem_euclid(TAU)
    }

    pub fn apply_geodesic(&self, g: &HGeodesic) -> HGeodesic {
        HGeodesic::new(self.apply_angle(g.alpha), self.apply_angle(g.beta))
    }

    /// A translation along an arbitrary geodesic: conjugate of a boost.
    pub fn translation_along(g: &HGeodesic, length: f64) -> Isometry {
        // map the x-axis frame to g's frame
        let (b, t) = g.frame();
        let n = g.normal();
        // columns: images of (1,0,0),(0,1,0),(0,0,1) = base, tangent, normal
        let conj = Isometry {
            m: [
                [b[0], t[0], n[0]],
                [b[1], t[1], n[1]],
                [b[2], t[2], n[2]],
            ],
        };
        let inv = conj.minkowski_inverse();
        conj.compose(&Isometry::boost(length)).compose(&inv)
    }

    fn minkowski_inverse(&self) -> Isometry {
        // J M^T J with J = diag(1,-1,-1) inverts a Lorentz matrix
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let sign = if (i == 0) != (j == 0) { -1.0 } else { 1.0 };
                *cell = sign * self.m[j][i];
            }
        }
        Isometry { m }
    }
}

/// Quadrature settings and the calibration constant of the invariant
/// geodesic measure.
#[derive(Clone, Debug)]
pub struct GeodesicMeasure {
    pub c: f64,
    pub alpha_steps: usize,
    pub grid: usize,
    pub tol: f64,
}

#[derive(Clone, Debug, Default)]
pub struct QuadratureSettings {
    pub alpha_steps: Option<usize>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
}

/// Second ideal endpoint of the geodesic through boundary angle `alpha` and
/// the interior point `p` (point-reflection of the first endpoint at p).
fn second_endpoint(alpha: f64, p: [f64; 3]) -> f64 {
    let n = null_vec(alpha);
    let k = 2.0 * mdot(n, p);
    let m = [k * p[0] - n[0], k * p[1] - n[1], k * p[2] - n[2]];
    m[2].atan2(m[1]).rem_euclid(TAU)
}

/// Antiderivative in beta of 1/(4 sin^2((alpha-beta)/2)) on the branch
/// beta - alpha in (0, 2pi).
fn cot_branch(alpha: f64, beta: f64) -> f64 {
    let s = (beta - alpha).rem_euclid(TAU);
    -0.5 / (s / 2.0).tan()
}

fn raw_crossing(alpha_steps: usize, x: &HPoint, y: &HPoint) -> f64 {
    let (px, py) = (x.mink(), y.mink());
    let integrand = |alpha: f64| {
        let bx = second_endpoint(alpha, px);
        let by = second_endpoint(alpha, py);
        (cot_branch(alpha, by) - cot_branch(alpha, bx)).abs()
    };
    // composite Simpson over the full circle
    let n = alpha_steps + alpha_steps % 2;
    let h = TAU / n as f64;
    let mut acc = integrand(0.0) + integrand(TAU);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * integrand(i as f64 * h);
    }
    acc * h / 3.0
}

impl GeodesicMeasure {
    /// Measure of geodesics separating `x` from `y`; equals d(x,y) by the
    /// Crofton identity.
    pub fn crossing_measure(&self, x: &HPoint, y: &HPoint) -> f64 {
        if (x.x - y.x).abs() < 1e-14 && (x.y - y.y).abs() < 1e-14 {
            return 0.0;
        }
        self.c * raw_crossing(self.alpha_steps, x, y)
    }

    /// Measure of geodesics separating two disjoint geodesics: both endpoint
    /// arcs between them, with a closed-form double integral.
    pub fn separating_measure(&self, a1: &HGeodesic, a2: &HGeodesic) -> Result<f64> {
        // circular order decides crossing: a1's endpoints must be adjacent
        let mut pts = [
            (a1.alpha, 0u8),
            (a1.beta, 0),
            (a2.alpha, 1),
            (a2.beta, 1),
        ];
        pts.sort_by(|u, v| u.0.partial_cmp(&v.0).unwrap());
        let labels: Vec<u8> = pts.iter().map(|&(_, l)| l).collect();
        let adjacent = labels[0] == labels[1] || labels[1] == labels[2];
        if !adjacent {
            return Err(Error::CrossingAxes);
        }
        // rotate so the order is (a1, a1, a2, a2)
        let start = (0..4)
            .find(|&i| labels[i % 4] == 0 && labels[(i + 1) % 4] == 0)
            .unwrap();
        let ang = |i: usize| {
            let (mut a, _) = pts[(start + i) % 4];
            // unwrap to an increasing sequence
            a += TAU * ((start + i) / 4) as f64;
            a
        };
        let (t0, t1, t2, t3) = (ang(0), ang(1), ang(2), ang(3));
        // gap arcs: (t1, t2) and (t3, t0 + 2pi)
        let (p, q) = (t1, t2);
        let (r, s) = (t3, t0 + TAU);
        let lnsin = |u: f64| ((u / 2.0).sin().abs()).ln();
        let i_val = lnsin(q - s) - lnsin(p - s) - lnsin(q - r) + lnsin(p - r);
        // ordered endpoint pairs count each geodesic twice
        Ok((2.0 * self.c * i_val).max(0.0))
    }

    /// Measure of geodesics separating `x`,`y` that meet the line through
    /// them at angle at least `theta` (2D grid quadrature).
    pub fn crossing_measure_above_angle(&self, x: &HPoint, y: &HPoint, theta: f64) -> f64 {
        let cells = self.angle_profile(x, y);
        let cos_t = theta.cos().abs();
        self.c * cells.iter().filter(|&&(c, _)| c <= cos_t + 1e-15).map(|&(_, w)| w).sum::<f64>()
    }

    /// For every separating grid cell: (|cos crossing angle|, density weight).
    fn angle_profile(&self, x: &HPoint, y: &HPoint) -> Vec<(f64, f64)> {
        let (px, py) = (x.mink(), y.mink());
        let line = line_through(x, y);
        let n0 = line.normal();
        let n = self.grid;
        let h = TAU / n as f64;
        let mut out = Vec::new();
        for i in 0..n {
            let alpha = (i as f64 + 0.5) * h;
            let na = null_vec(alpha);
            for j in 0..n {
                let beta = (j as f64 + 0.5) * h;
                let gap = angle_gap(alpha, beta);
                if gap < 1e-9 {
                    continue;
                }
                let nb = null_vec(beta);
                let cross = [
                    na[1] * nb[2] - na[2] * nb[1],
                    na[2] * nb[0] - na[0] * nb[2],
                    na[0] * nb[1] - na[1] * nb[0],
                ];
                let v = [cross[0], -cross[1], -cross[2]];
                let sx = mdot(v, px);
                let sy = mdot(v, py);
                if sx.signum() == sy.signum() {
                    continue;
                }
                let norm = (-mdot(v, v)).max(1e-300).sqrt();
                let cos_angle = (mdot([v[0] / norm, v[1] / norm, v[2] / norm], n0)).abs();
                let dens = h * h / (4.0 * ((alpha - beta) / 2.0).sin().powi(2));
                out.push((cos_angle.min(1.0), dens));
            }
        }
        out
    }

    /// Bisected angle theta0 with the measure of unit-segment crossings at
    /// angle >= theta0 equal to 1/2.
    pub fn half_measure_angle(&self) -> Result<f64> {
        let x = HPoint::new(0.0, 0.0);
        let y = HPoint::new((0.5f64).tanh(), 0.0);
        let cells = self.angle_profile(&x, &y);
        let above = |theta: f64| {
            let cos_t = theta.cos().abs();
            self.c
                * cells
                    .iter()
                    .filter(|&&(c, _)| c <= cos_t + 1e-15)
                    .map(|&(_, w)| w)
                    .sum::<f64>()
        };
        let (mut lo, mut hi) = (1e-6, std::f64::consts::FRAC_PI_2 - 1e-6);
        if above(lo) < 0.5 || above(hi) > 0.5 {
            return Err(Error::BisectionFailure);
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if above(mid) >= 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// One distance-bound trial: lhs = separating measure, rhs the floor
    /// bound (d - 2 d0)/2 at the given theta0.
    pub fn distance_bound_check(
        &self,
        a1: &HGeodesic,
        a2: &HGeodesic,
        theta0: f64,
    ) -> Result<BoundReport> {
        let d = geodesic_distance(a1, a2);
        let lhs = self.separating_measure(a1, a2)?;
        let d0 = d0_of_theta0(theta0);
        let rhs = 0.5 * (d - 2.0 * d0).floor();
        Ok(BoundReport { distance: d, lhs, rhs, pass: lhs >= rhs - 0.01 * d })
    }

    /// Periodic chart along a translation axis; separator measure between
    /// axis points is their parameter gap.
    pub fn axis_chart(&self, gamma: &HGeodesic, z: &Isometry) -> Result<HAxisChart> {
        let img = z.apply_geodesic(gamma);
        let fixed = angle_gap(img.alpha, gamma.alpha) < 1e-8
            && angle_gap(img.beta, gamma.beta) < 1e-8;
        if !fixed {
            return Err(Error::NotTranslationAxis);
        }
        let base = gamma.point_at(0.0);
        let period = gamma.param_of(&z.apply(&base));
        if period.abs() < 1e-10 {
            return Err(Error::NotTranslationAxis);
        }
        Ok(HAxisChart { gamma: *gamma, period: period.abs() })
    }
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub distance: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// The complete geodesic through two distinct points.
pub fn line_through(x: &HPoint, y: &HPoint) -> HGeodesic {
    let (px, py) = (x.mink(), y.mink());
    // ideal endpoints: solutions of <px cosh s + t sinh s, .> null; easier:
    // shoot both reflections far out along the line
    let d = hyperbolic_distance(x, y);
    assert!(d > 1e-13, "points must be distinct");
    // unit tangent at x toward y
    let k = mdot(px, py);
    let t = [
        (py[0] - k * px[0]) / d.sinh().max(1e-300),
        (py[1] - k * px[1]) / d.sinh().max(1e-300),
        (py[2] - k * px[2]) / d.sinh().max(1e-300),
    ];
    let fwd = [px[0] + t[0], px[1] + t[1], px[2] + t[2]]; // null direction
    let bwd = [px[0] - t[0], px[1] - t[1], px[2] - t[2]];
    HGeodesic::new(bwd[2].atan2(bwd[1]), fwd[2].atan2(fwd[1]))
}

/// Relation between the half-measure angle and the distance threshold:
/// sinh(d0) = cot(theta0).
pub fn d0_of_theta0(theta0: f64) -> f64 {
    assert!(theta0 > 0.0 && theta0 < std::f64::consts::FRAC_PI_2);
    (1.0 / theta0.tan()).asinh()
}

/// Calibrates the measure so the crossing measure of a unit segment is 1.
pub fn calibrate(settings: &QuadratureSettings) -> Result<GeodesicMeasure> {
    let alpha_steps = settings.alpha_steps.unwrap_or(2048);
    let grid = settings.grid.unwrap_or(600);
    let tol = settings.tol.unwrap_or(0.02);
    let x = HPoint::new(0.0, 0.0);
    let y = HPoint::new((0.5f64).tanh(), 0.0);
    let coarse = raw_crossing(alpha_steps / 2, &x, &y);
    let fine = raw_crossing(alpha_steps, &x, &y);
    if fine <= 0.0 || ((coarse - fine) / fine).abs() > tol {
        return Err(Error::QuadratureDivergence(format!(
            "unit segment estimates {coarse} vs {fine}"
        )));
    }
    Ok(GeodesicMeasure { c: 1.0 / fine, alpha_steps, grid, tol })
}

/// A pair of disjoint geodesics at the given distance in random position.
pub fn random_disjoint_pair<R: Rng>(d: f64, rng: &mut R) -> (HGeodesic, HGeodesic) {
    let g1 = HGeodesic::new(std::f64::consts::FRAC_PI_2, 3.0 * std::f64::consts::FRAC_PI_2);
    let off = (d.tanh().acos()).abs();
    let g2 = HGeodesic::new(off, TAU - off);
    let iso = Isometry::rotation(rng.gen_range(0.0..TAU))
        .compose(&Isometry::boost(rng.gen_range(0.0..1.5)))
        .compose(&Isometry::rotation(rng.gen_range(0.0..TAU)));
    (iso.apply_geodesic(&g1), iso.apply_geodesic(&g2))
}

/// The chart of axis-crossing walls along a translation axis.
#[derive(Clone, Debug)]
pub struct HAxisChart {
    pub gamma: HGeodesic,
    pub period: f64,
}

impl HAxisChart {
    pub fn param_of(&self, p: &HPoint) -> f64 {
        self.gamma.param_of(p)
    }

    /// For points on the axis: walls crossing strictly between them.
    pub fn separator_set(&self, p: &HPoint, q: &HPoint) -> IntervalSet {
        let (s, t) = (self.param_of(p), self.param_of(q));
        IntervalSet::interval(s.min(t), s.max(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn measure() -> GeodesicMeasure {
        calibrate(&QuadratureSettings::default()).unwrap()
    }

    #[test]
    fn distances() {
        let o = HPoint::new(0.0, 0.0);
        let q = HPoint::new((0.5f64).tanh(), 0.0);
        assert!((hyperbolic_distance(&o, &q) - 1.0).abs() < 1e-12);
        assert_eq!(hyperbolic_distance(&o, &o), 0.0);
    }

    #[test]
    fn crofton_identity() {
        let m = measure();
        let o = HPoint::new(0.0, 0.0);
        for d in [0.5, 1.0, 2.0, 3.7] {
            let p = HPoint::new((d / 2.0f64).tanh(), 0.0);
            let got = m.crossing_measure(&o, &p);
            assert!((got - d).abs() <= 0.02 * d, "d={d} got={got}");
        }
        assert_eq!(m.crossing_measure(&o, &o), 0.0);
    }

    #[test]
    fn crofton_additive_on_collinear() {
        let m = measure();
        let g = HGeodesic::new(0.3, 2.9);
        let (x, z, y) = (g.point_at(-1.0), g.point_at(0.4), g.point_at(1.5));
        let whole = m.crossing_measure(&x, &y);
        let parts = m.crossing_measure(&x, &z) + m.crossing_measure(&z, &y);
        assert!((whole - parts).abs() <= 0.03 * whole);
    }

    #[test]
    fn isometry_invariance() {
        let m = measure();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let x = HPoint::new(0.3, -0.1);
        let y = HPoint::new(-0.2, 0.4);
        let base = m.crossing_measure(&x, &y);
        for _ in 0..5 {
            let iso = Isometry::rotation(rng.gen_range(0.0..TAU))
                .compose(&Isometry::boost(rng.gen_range(0.0..1.0)));
            let got = m.crossing_measure(&iso.apply(&x), &iso.apply(&y));
            assert!((got - base).abs() <= 0.02 * base);
        }
    }

    #[test]
    fn separating_measure_matches_grid_oracle() {
        let m = measure();
        let g1 = HGeodesic::new(std::f64::consts::FRAC_PI_2, 3.0 * std::f64::consts::FRAC_PI_2);
        let d = 3.0f64;
        let off = d.tanh().acos();
        let g2 = HGeodesic::new(off, TAU - off);
        assert!((geodesic_distance(&g1, &g2) - d).abs() < 1e-9);
        let closed = m.separating_measure(&g1, &g2).unwrap();
        // independent oracle: brute-force grid sum over the two gap arcs
        let n = 2000;
        let mut acc = 0.0;
        let arc1: (f64, f64) = (off, std::f64::consts::FRAC_PI_2); // between g2.alpha and g1.alpha
        let arc2: (f64, f64) = (3.0 * std::f64::consts::FRAC_PI_2, TAU - off);
        let (h1, h2) = ((arc1.1 - arc1.0) / n as f64, (arc2.1 - arc2.0) / n as f64);
        for i in 0..n {
            let a = arc1.0 + (i as f64 + 0.5) * h1;
            for j in 0..n {
                let b = arc2.0 + (j as f64 + 0.5) * h2;
                acc += h1 * h2 / (4.0 * ((a - b) / 2.0).sin().powi(2));
            }
        }
        let oracle = 2.0 * m.c * acc;
        assert!(
            (closed - oracle).abs() <= 0.01 * oracle.max(1e-6),
            "closed={closed} oracle={oracle}"
        );
        // crossing pair
        let cross = HGeodesic::new(0.0, std::f64::consts::PI);
        assert!(matches!(m.separating_measure(&g1, &cross), Err(Error::CrossingAxes)));
    }

    #[test]
    fn d0_formula() {
        assert!((d0_of_theta0(std::f64::consts::FRAC_PI_4) - 1.0f64.asinh()).abs() < 1e-12);
        assert!((d0_of_theta0(std::f64::consts::FRAC_PI_6) - 3.0f64.sqrt().asinh()).abs() < 1e-12);
        assert!(d0_of_theta0(std::f64::consts::FRAC_PI_2 - 1e-6) < 1e-5);
    }

    #[test]
    fn half_measure_angle_consistent() {
        let m = measure();
        let theta0 = m.half_measure_angle().unwrap();
        let x = HPoint::new(0.0, 0.0);
        let y = HPoint::new((0.5f64).tanh(), 0.0);
        let at = m.crossing_measure_above_angle(&x, &y, theta0);
        assert!((0.5..=0.53).contains(&at), "theta0={theta0} at={at}");
        // limits
        let all = m.crossing_measure_above_angle(&x, &y, 1e-6);
        assert!((all - 1.0).abs() < 0.03, "all={all}");
        let none = m.crossing_measure_above_angle(&x, &y, std::f64::consts::FRAC_PI_2 - 1e-4);
        assert!(none < 0.05, "none={none}");
    }

    #[test]
    fn distance_bound_trials() {
        let m = measure();
        let theta0 = m.half_measure_angle().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let d = rng.gen_range(2.0..8.0);
            let (g1, g2) = random_disjoint_pair(d, &mut rng);
            let rep = m.distance_bound_check(&g1, &g2, theta0).unwrap();
            assert!(rep.pass, "d={d} lhs={} rhs={}", rep.lhs, rep.rhs);
        }
    }

    #[test]
    fn axis_chart_basics() {
        let m = measure();
        let g = HGeodesic::new(0.0, std::f64::consts::PI);
        let z = Isometry::translation_along(&g, 1.75);
        let chart = m.axis_chart(&g, &z).unwrap();
        assert!((chart.period - 1.75).abs() < 1e-9);
        let (p, q) = (g.point_at(-0.5), g.point_at(1.2));
        let sep = chart.separator_set(&p, &q);
        assert!((sep.lebesgue() - 1.7).abs() < 1e-9);
        // chart measure agrees with the ambient crossing measure
        let amb = m.crossing_measure(&p, &q);
        assert!((amb - 1.7).abs() < 0.02 * 1.7);
        // deck equivariance: translating both points shifts the set by L
        let sep2 = chart.separator_set(&z.apply(&p), &z.apply(&q));
        let (a, b) = sep.intervals()[0];
        let (a2, b2) = sep2.intervals()[0];
        assert!((a2 - a - 1.75).abs() < 1e-9 && (b2 - b - 1.75).abs() < 1e-9);
        // a rotation is not a translation along g
        assert!(matches!(
            m.axis_chart(&g, &Isometry::rotation(1.0)),
            Err(Error::NotTranslationAxis)
        ));
    }
}
