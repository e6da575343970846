//! The pattern family used by the abundance result: for a prime modulus
//! n+1, the i-th member places the origin, the first basis vector, and
//! k−2 further unit vectors at equal angular steps of 2πi/(n+1) in the
//! first coordinate plane. Also selects the prime modulus from the
//! quantitative windows and carries the constants those windows come from,
//! in log-space where floats give out.

use crate::geometry::{GeometryError, Pattern, Point};
use crate::primes::{is_prime, next_prime_above, smallest_prime_in_open};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("pattern order must be at least 3, got {0}")]
    BadOrder(usize),
    #[error("epsilon0 must lie in (0, 1], got {0}")]
    BadEpsilon(f64),
    #[error("the density constant must be positive and finite, got {0}")]
    BadConstant(f64),
    #[error("modulus {0} must be prime")]
    CompositeModulus(usize),
    #[error("need n >= k for distinct angles, got n = {n}, k = {k}")]
    ModulusBelowOrder { n: usize, k: usize },
    #[error("no admissible prime in the open window ({lo}, {hi})")]
    WindowEmpty { lo: f64, hi: f64 },
    #[error("pattern index {index} must lie in 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A signed magnitude stored behind nested exponentials: the value is
/// `sign · exp(exp(· · · exp(seed) · · ·))` with `level` exponentials
/// (level 0 is `sign · seed` itself). Construction collapses levels while
/// the result stays inside f64 range, so a canonical tower with level ≥ 1
/// is genuinely beyond floats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogTower {
    pub sign: i8,
    pub level: u32,
    pub seed: f64,
}

impl SignedLogTower {
    pub fn new(sign: i8, mut level: u32, mut seed: f64) -> Self {
        assert!(sign == -1 || sign == 0 || sign == 1, "sign must be -1, 0 or 1");
        while level > 0 && seed < 709.0 {
            seed = seed.exp();
            level -= 1;
        }
        let sign = if level == 0 && seed == 0.0 { 0 } else { sign };
        SignedLogTower { sign, level, seed }
    }

    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite());
        SignedLogTower::new(if v > 0.0 { 1 } else if v < 0.0 { -1 } else { 0 }, 0, v.abs())
    }

    /// Linear-space rendering; infinite when the tower outgrows f64.
    pub fn to_f64(&self) -> f64 {
        let mag = if self.level == 0 { self.seed } else { f64::INFINITY };
        self.sign as f64 * mag
    }

    pub fn is_representable(&self) -> bool {
        self.level == 0
    }

    /// Adds a plain float. Exact at level 0; at level 1 and beyond the
    /// tower dwarfs any float and the sum is the tower itself.
    pub fn add_f64(&self, rhs: f64) -> Self {
        assert!(rhs.is_finite());
        if self.level == 0 {
            SignedLogTower::from_f64(self.sign as f64 * self.seed + rhs)
        } else {
            *self
        }
    }
}

impl std::fmt::Display for SignedLogTower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        for _ in 0..self.level {
            write!(f, "exp(")?;
        }
        write!(f, "{}", self.seed)?;
        for _ in 0..self.level {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Inputs of one concrete pattern family: order k, ambient dimension d,
/// modulus n with n+1 prime, the ambient density constant, and the density
/// increment epsilon0 the windows are tuned to.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogSpec {
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub c_d: f64,
    pub epsilon0: f64,
}

impl CatalogSpec {
    pub fn new(k: usize, d: usize, n: usize, c_d: f64, epsilon0: f64) -> Result<Self, CatalogError> {
        if k < 3 {
            return Err(CatalogError::BadOrder(k));
        }
        if d < 2 {
            return Err(CatalogError::Geometry(GeometryError::BadDimension(d)));
        }
        if !(epsilon0 > 0.0) || !(epsilon0 <= 1.0) {
            return Err(CatalogError::BadEpsilon(epsilon0));
        }
        if !(c_d > 0.0) || !c_d.is_finite() {
            return Err(CatalogError::BadConstant(c_d));
        }
        if !is_prime(n as u64 + 1) {
            return Err(CatalogError::CompositeModulus(n + 1));
        }
        if n < k {
            return Err(CatalogError::ModulusBelowOrder { n, k });
        }
        Ok(CatalogSpec { k, d, n, c_d, epsilon0 })
    }
}

/// Constants behind the windows. The exponent `c` is the dyadic
/// `2^(−2^c_exponent)` and is only ever used in log-space; epsilon is
/// carried as its logarithm because the k ≥ 4 case lives a few
/// exponentials below float range.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremConstants {
    pub k: usize,
    pub c_exponent: u32,
    pub ln_epsilon: SignedLogTower,
    pub m_d: f64,
    pub ln_epsilon_tilde: SignedLogTower,
}

impl TheoremConstants {
    /// Linear-space epsilon; underflows to 0 when the tower is beyond f64.
    pub fn epsilon(&self) -> f64 {
        self.ln_epsilon.to_f64().exp()
    }

    pub fn epsilon_tilde(&self) -> f64 {
        self.ln_epsilon_tilde.to_f64().exp()
    }
}

fn validate_window_inputs(k: usize, d: usize, epsilon0: f64, c_d: f64) -> Result<(), CatalogError> {
    if k < 3 {
        return Err(CatalogError::BadOrder(k));
    }
    if d < 2 {
        return Err(CatalogError::Geometry(GeometryError::BadDimension(d)));
    }
    if !(epsilon0 > 0.0) || !(epsilon0 <= 1.0) {
        return Err(CatalogError::BadEpsilon(epsilon0));
    }
    if !(c_d > 0.0) || !c_d.is_finite() {
        return Err(CatalogError::BadConstant(c_d));
    }
    Ok(())
}

/// ln of |ln epsilon| data for k ≥ 4: |ln eps| = exp(B^(1/c)) with
/// B = 20 π C_d / epsilon0 and 1/c = 2^(2^(k+8)). Returned as a tower.
fn ln_epsilon_tail(k: usize, epsilon0: f64, c_d: f64) -> SignedLogTower {
    let base = 20.0 * std::f64::consts::PI * c_d / epsilon0;
    let l = base.ln();
    if l > 0.0 {
        // lnln X = 2^(k+8) ln 2 + ln ln B, then |ln eps| = exp(X)
        let lnln_x = 2f64.powi((k + 8) as i32) * std::f64::consts::LN_2 + l.ln();
        SignedLogTower::new(-1, 3, lnln_x)
    } else if l == 0.0 {
        // B = 1: X = 1, ln eps = -e
        SignedLogTower::new(-1, 0, std::f64::consts::E)
    } else {
        // B < 1: X -> 0, ln eps -> -1
        SignedLogTower::new(-1, 0, 1.0)
    }
}

/// The case split: for k = 3, epsilon = epsilon0^2 and M_d = 10^10 π C_d^2;
/// for k ≥ 4, ln epsilon = −exp((20 π C_d / epsilon0)^(1/c)) with the
/// dyadic c = 2^(−2^(k+8)), and M_d = 10 C_d. epsilon_tilde = epsilon / M_d
/// throughout, carried as ln epsilon − ln M_d.
pub fn theorem_constants(
    k: usize,
    d: usize,
    epsilon0: f64,
    c_d: f64,
) -> Result<TheoremConstants, CatalogError> {
    validate_window_inputs(k, d, epsilon0, c_d)?;
    let (ln_epsilon, m_d) = if k == 3 {
        let ln_eps = SignedLogTower::from_f64(2.0 * epsilon0.ln());
        (ln_eps, 1e10 * std::f64::consts::PI * c_d * c_d)
    } else {
        (ln_epsilon_tail(k, epsilon0, c_d), 10.0 * c_d)
    };
    let ln_epsilon_tilde = ln_epsilon.add_f64(-m_d.ln());
    Ok(TheoremConstants {
        k,
        c_exponent: (k + 8) as u32,
        ln_epsilon,
        m_d,
        ln_epsilon_tilde,
    })
}

/// The open prime window, either directly or via the seed X of
/// `(exp(exp(X))/3, exp(exp(X)))` when the bounds outgrow floats.
#[derive(Debug, Clone, PartialEq)]
pub enum PrimeWindow {
    Linear { lo: f64, hi: f64 },
    Astronomical { x: SignedLogTower },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeSelection {
    /// The chosen modulus n+1.
    pub prime: u64,
    pub window: PrimeWindow,
    /// False when the theory window was infeasible and a demo-scale prime
    /// was substituted.
    pub in_theory_window: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeOptions {
    /// Windows whose lower bound exceeds this are downgraded to demo scale.
    pub feasibility_cap: u64,
    /// Lower bound for the demo-scale substitute prime.
    pub demo_floor: u64,
}

impl Default for PrimeOptions {
    fn default() -> Self {
        PrimeOptions { feasibility_cap: 10_000_000, demo_floor: 10 }
    }
}

/// Smallest prime admissible for order k (so that n = p−1 >= k) in the
/// open interval, if any.
fn admissible_prime_in_open(lo: f64, hi: f64, k: usize) -> Option<u64> {
    let floor = (k as f64).max(lo); // primes <= k give n < k
    smallest_prime_in_open(floor.max(lo), hi).filter(|&p| p as usize > k)
}

/// Picks the modulus n+1 for the pattern family. For k = 3 the window is
/// `(20 π C_d / epsilon0, 60 π C_d / epsilon0)` and a prime in it always
/// exists for any lower bound above 2 (there is a prime between m and 2m);
/// an empty window is an error. For k ≥ 4 the window is
/// `(exp(exp(X))/3, exp(exp(X)))` with X = (20 π C_d / epsilon0)^(1/c);
/// the bounds are sized up in log-space, and when the window is beyond the
/// feasibility cap, or contains no admissible prime, the smallest prime
/// above `demo_floor` is returned flagged as out of the theory window.
/// Prime search is ascending, so the result is always the smallest
/// admissible choice.
pub fn select_prime(
    k: usize,
    d: usize,
    epsilon0: f64,
    c_d: f64,
    opts: &PrimeOptions,
) -> Result<PrimeSelection, CatalogError> {
    validate_window_inputs(k, d, epsilon0, c_d)?;
    if k == 3 {
        let lo = 20.0 * std::f64::consts::PI * c_d / epsilon0;
        let hi = 3.0 * lo;
        let prime = admissible_prime_in_open(lo, hi, k)
            .ok_or(CatalogError::WindowEmpty { lo, hi })?;
        return Ok(PrimeSelection {
            prime,
            window: PrimeWindow::Linear { lo, hi },
            in_theory_window: true,
        });
    }
    let base = 20.0 * std::f64::consts::PI * c_d / epsilon0;
    let l = base.ln();
    let demo = |window: PrimeWindow| {
        let floor = opts.demo_floor.max(k as u64);
        PrimeSelection { prime: next_prime_above(floor), window, in_theory_window: false }
    };
    if l > 0.0 {
        // ln X = 2^(2^(k+8)) ln B, far past any cap worth checking in
        // linear space; compare ln ln of the window's lower bound instead.
        let lnln_x = 2f64.powi((k + 8) as i32) * std::f64::consts::LN_2 + l.ln();
        let x = SignedLogTower::new(1, 2, lnln_x);
        let window = PrimeWindow::Astronomical { x };
        // feasible only if exp(exp(X))/3 <= cap; X here is at least
        // exp(exp(lnln_x)) with lnln_x >= 2^12 ln 2, hopeless.
        let cap_ok = x.is_representable()
            && (x.to_f64().exp().exp() / 3.0) <= opts.feasibility_cap as f64;
        if !cap_ok {
            return Ok(demo(window));
        }
        let hi = x.to_f64().exp().exp();
        return Ok(match admissible_prime_in_open(hi / 3.0, hi, k) {
            Some(prime) => PrimeSelection { prime, window: PrimeWindow::Linear { lo: hi / 3.0, hi }, in_theory_window: true },
            None => demo(PrimeWindow::Linear { lo: hi / 3.0, hi }),
        });
    }
    // B <= 1 keeps X in [0, 1] and the window inside (e/3, e^e]
    let x_val: f64 = if l == 0.0 { 1.0 } else { 0.0 };
    let hi = x_val.exp().exp();
    let lo = hi / 3.0;
    let window = PrimeWindow::Linear { lo, hi };
    if lo > opts.feasibility_cap as f64 {
        return Ok(demo(window));
    }
    Ok(match admissible_prime_in_open(lo, hi, k) {
        Some(prime) => PrimeSelection { prime, window, in_theory_window: true },
        None => demo(window),
    })
}

/// The i-th pattern: origin, the first basis vector, and unit vectors at
/// angles j·2πi/(n+1), j = 1..k−2, in the first coordinate plane, padded
/// with zeros up to dimension d. All k points are distinct because n+1 is
/// prime and the angle multipliers stay below n+1.
pub fn catalog_pattern(spec: &CatalogSpec, index: usize) -> Result<Pattern, CatalogError> {
    if index < 1 || index > spec.n {
        return Err(CatalogError::IndexOutOfRange { index, n: spec.n });
    }
    let gap = std::f64::consts::TAU * index as f64 / (spec.n as f64 + 1.0);
    let mut points = Vec::with_capacity(spec.k);
    points.push(Point::origin(spec.d));
    for j in 0..=(spec.k - 2) {
        let angle = gap * j as f64;
        let mut coords = vec![0.0; spec.d];
        coords[0] = angle.cos();
        coords[1] = angle.sin();
        points.push(Point::new(coords)?);
    }
    Ok(Pattern::new(points)?)
}

/// All n patterns, in index order. Deterministic.
pub fn build_catalog(spec: &CatalogSpec) -> Result<Vec<Pattern>, CatalogError> {
    (1..=spec.n).map(|i| catalog_pattern(spec, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn angles_of(p: &Pattern) -> Vec<f64> {
        p.points()[1..]
            .iter()
            .map(|q| q.coords()[1].atan2(q.coords()[0]).rem_euclid(std::f64::consts::TAU))
            .collect()
    }

    #[test]
    fn tower_collapses_when_it_fits() {
        let t = SignedLogTower::new(1, 2, 1.0);
        assert_eq!(t.level, 0);
        assert!((t.to_f64() - 1f64.exp().exp()).abs() < 1e-12);
        let big = SignedLogTower::new(-1, 3, 2840.0);
        assert_eq!(big.level, 3);
        assert_eq!(big.to_f64(), f64::NEG_INFINITY);
        assert!(!big.is_representable());
        assert_eq!(format!("{}", SignedLogTower::new(-1, 1, 800.0)), "-exp(800)");
    }

    #[test]
    fn constants_for_order_three() {
        let c = theorem_constants(3, 2, 0.1, 1.0).unwrap();
        assert!((c.epsilon() - 0.01).abs() < 1e-15);
        assert!((c.m_d - 1e10 * std::f64::consts::PI).abs() < 1.0);
        let expect = 0.01 / (1e10 * std::f64::consts::PI);
        assert!((c.epsilon_tilde() - expect).abs() < 1e-12 * expect);
        assert_eq!(c.c_exponent, 11);
    }

    #[test]
    fn constants_for_order_four_live_past_floats() {
        let c = theorem_constants(4, 2, 0.5, 1.0).unwrap();
        assert_eq!(c.ln_epsilon.sign, -1);
        assert_eq!(c.ln_epsilon.level, 3);
        // seed of the level-3 tower is lnln X = 2^12 ln 2 + lnln B
        let base: f64 = 40.0 * std::f64::consts::PI;
        let expect = 4096.0 * std::f64::consts::LN_2 + base.ln().ln();
        assert!((c.ln_epsilon.seed - expect).abs() < 1e-9);
        assert_eq!(c.epsilon(), 0.0); // underflow, by design
        assert!((c.m_d - 10.0).abs() < 1e-12);
    }

    #[test]
    fn doubling_the_constant_scales_as_algebra_says() {
        let a = theorem_constants(3, 2, 0.3, 1.0).unwrap();
        let b = theorem_constants(3, 2, 0.3, 2.0).unwrap();
        assert_eq!(a.epsilon(), b.epsilon());
        assert!((b.m_d - 4.0 * a.m_d).abs() < 1e-3);
        let drop = a.ln_epsilon_tilde.to_f64() - b.ln_epsilon_tilde.to_f64();
        assert!((drop - 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn prime_window_small_orders() {
        let opts = PrimeOptions::default();
        let s = select_prime(3, 2, 1.0, 1.0, &opts).unwrap();
        assert_eq!(s.prime, 67);
        assert!(s.in_theory_window);
        match s.window {
            PrimeWindow::Linear { lo, hi } => {
                assert!((lo - 20.0 * std::f64::consts::PI).abs() < 1e-9);
                assert!((hi - 60.0 * std::f64::consts::PI).abs() < 1e-9);
            }
            _ => panic!("expected a linear window"),
        }
        assert_eq!(select_prime(3, 2, 0.5, 1.0, &opts).unwrap().prime, 127);
    }

    #[test]
    fn prime_always_found_across_the_sweep() {
        let opts = PrimeOptions::default();
        for eps in [1.0, 0.5, 0.2, 0.1, 0.05] {
            let s = select_prime(3, 2, eps, 1.0, &opts).unwrap();
            match s.window {
                PrimeWindow::Linear { lo, hi } => {
                    let p = s.prime as f64;
                    assert!(lo < p && p < hi, "prime {p} outside ({lo}, {hi})");
                }
                _ => panic!("order three windows are linear"),
            }
            assert!(s.in_theory_window);
        }
    }

    #[test]
    fn order_four_window_downgrades_to_demo_scale() {
        let opts = PrimeOptions { feasibility_cap: 10_000_000, demo_floor: 100 };
        let s = select_prime(4, 2, 0.5, 1.0, &opts).unwrap();
        assert!(!s.in_theory_window);
        assert_eq!(s.prime, 101);
        match s.window {
            PrimeWindow::Astronomical { x } => {
                assert!(!x.is_representable());
                assert_eq!(x.level, 2);
            }
            _ => panic!("expected an astronomical window"),
        }
    }

    #[test]
    fn order_four_window_feasible_at_unit_base() {
        // 20 pi C_d / eps0 = 1 keeps the window at (e^e/3, e^e)
        let c_d = 1.0 / (20.0 * std::f64::consts::PI);
        let opts = PrimeOptions::default();
        let s = select_prime(4, 2, 1.0, c_d, &opts).unwrap();
        assert!(s.in_theory_window);
        assert_eq!(s.prime, 7);
        match s.window {
            PrimeWindow::Linear { lo, hi } => {
                assert!(lo < 7.0 && 7.0 < hi);
            }
            _ => panic!("expected a linear window"),
        }
    }

    #[test]
    fn order_four_tiny_base_has_no_admissible_prime() {
        // window collapses to (e/3, e); nothing >= k+1 in there
        let opts = PrimeOptions { feasibility_cap: 10_000_000, demo_floor: 10 };
        let s = select_prime(4, 2, 1.0, 0.005, &opts).unwrap();
        assert!(!s.in_theory_window);
        assert_eq!(s.prime, 11);
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(CatalogSpec::new(2, 2, 10, 1.0, 1.0), Err(CatalogError::BadOrder(2))));
        assert!(matches!(
            CatalogSpec::new(3, 2, 9, 1.0, 1.0),
            Err(CatalogError::CompositeModulus(10))
        ));
        assert!(matches!(
            CatalogSpec::new(5, 2, 4, 1.0, 1.0),
            Err(CatalogError::ModulusBelowOrder { n: 4, k: 5 })
        ));
        assert!(CatalogSpec::new(3, 2, 4, 1.0, 1.0).is_ok());
        assert!(matches!(
            CatalogSpec::new(3, 2, 4, 1.0, 1.5),
            Err(CatalogError::BadEpsilon(_))
        ));
    }

    #[test]
    fn first_pattern_of_the_five_family() {
        let spec = CatalogSpec::new(3, 2, 4, 1.0, 1.0).unwrap();
        let v = catalog_pattern(&spec, 1).unwrap();
        let pts = v.points();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[0], Point::origin(2));
        assert_eq!(pts[1], Point::planar(1.0, 0.0));
        let theta = std::f64::consts::TAU / 5.0; // 72 degrees
        assert!((pts[2].coords()[0] - theta.cos()).abs() < 1e-15);
        assert!((pts[2].coords()[1] - theta.sin()).abs() < 1e-15);
    }

    #[test]
    fn order_four_patterns_step_twice() {
        let spec = CatalogSpec::new(4, 2, 6, 1.0, 1.0).unwrap();
        let v = catalog_pattern(&spec, 1).unwrap();
        let gap = std::f64::consts::TAU / 7.0;
        let angles = angles_of(&v);
        assert!((angles[0] - 0.0).abs() < 1e-15);
        assert!((angles[1] - gap).abs() < 1e-12);
        assert!((angles[2] - 2.0 * gap).abs() < 1e-12);
    }

    #[test]
    fn every_member_is_unit_normed_with_equal_gaps() {
        let spec = CatalogSpec::new(4, 3, 10, 1.0, 1.0).unwrap();
        let catalog = build_catalog(&spec).unwrap();
        assert_eq!(catalog.len(), 10);
        for (idx, v) in catalog.iter().enumerate() {
            let i = idx + 1;
            assert_eq!(v.dim(), 3);
            assert!(v.points()[0].is_zero());
            for p in &v.points()[1..] {
                assert!((p.norm() - 1.0).abs() < 1e-12);
                assert_eq!(p.coords()[2], 0.0);
            }
            let gap = std::f64::consts::TAU * i as f64 / 11.0;
            let angles = angles_of(v);
            for w in angles.windows(2) {
                let step = (w[1] - w[0]).rem_euclid(std::f64::consts::TAU);
                assert!(
                    (step - gap.rem_euclid(std::f64::consts::TAU)).abs() < 1e-9,
                    "index {i}: step {step} vs gap {gap}"
                );
            }
        }
    }

    #[test]
    fn catalog_is_deterministic() {
        let spec = CatalogSpec::new(3, 2, 10, 1.0, 1.0).unwrap();
        assert_eq!(build_catalog(&spec).unwrap(), build_catalog(&spec).unwrap());
    }

    #[test]
    fn index_bounds_enforced() {
        let spec = CatalogSpec::new(3, 2, 4, 1.0, 1.0).unwrap();
        assert!(matches!(
            catalog_pattern(&spec, 0),
            Err(CatalogError::IndexOutOfRange { index: 0, n: 4 })
        ));
        assert!(matches!(
            catalog_pattern(&spec, 5),
            Err(CatalogError::IndexOutOfRange { index: 5, n: 4 })
        ));
    }
}
