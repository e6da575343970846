//! End-to-end pass over the public API: exact progression counts, a torus
//! avoider, a cone collapse certificate, the catalog prime, and one pinned
//! scan. Run with `cargo run -p pinpat --example smoke`.

use pinpat::catalog::{select_prime, PrimeOptions};
use pinpat::cone::{validate_angle_collapse, ConeParameters};
use pinpat::detector::pinned_scaling_set;
use pinpat::geometry::{DiscretizedSet, Isometry, Pattern, Point};
use pinpat::seeding::stream_rng;
use pinpat::torus::search::{search_avoider, SearchParams};
use pinpat::torus::solver::r_m_exact;

fn main() {
    let (r3, witness_free_set) = r_m_exact(20, 3, 64).expect("N=20 is within the exact range");
    println!("r_3(Z/20Z) = {} (e.g. {:?})", r3, witness_free_set.members());

    let params = SearchParams::new(10, 3);
    let mut rng = stream_rng(42, 0);
    let avoider = search_avoider(&mut rng, &params).expect("search runs");
    println!(
        "torus avoider for n+1=11: measure {:.6} (cap {:.6})",
        avoider.measure(),
        std::f64::consts::TAU / 11.0
    );

    let cone = ConeParameters::standard(std::f64::consts::FRAC_PI_3, 2).expect("valid");
    let pin = Point::planar(1.0, 0.0);
    let report = validate_angle_collapse(&cone.cone(), cone.slack_exponent, &pin, 20_000, 7)
        .expect("pin sits on the axis");
    println!(
        "collapse threshold at |x|=1: {:.3}, max far-field angle {:.6} <= {:.6}, violations {}",
        report.threshold, report.max_angle, report.collapse_angle, report.violations
    );

    let sel = select_prime(3, 2, 1.0, 1.0, &PrimeOptions::default()).expect("window nonempty");
    println!("catalog prime for k=3: {} (in theory window: {})", sel.prime, sel.in_theory_window);

    // five points of a unit circle copy, pinned at the origin
    let v = Pattern::new(vec![
        Point::origin(2),
        Point::planar(1.0, 0.0),
        Point::planar(0.5f64.cos(), 0.5f64.sin()),
    ])
    .unwrap();
    let rot = Isometry::planar_rotation(2, 0.9);
    let pts: Vec<Point> = v
        .points()
        .iter()
        .map(|p| rot.apply(p).unwrap().scale(1.5))
        .collect();
    let e = DiscretizedSet::new(pts, 0.5, 1e-6).unwrap();
    let grid: Vec<f64> = (1..=30).map(|i| 0.1 * i as f64).collect();
    let scan = pinned_scaling_set(&e, &Point::origin(2), &v, &grid, 1e-4).unwrap();
    println!(
        "pinned scan: accepted scales {:?}, density {:.4}",
        scan.accepted(),
        scan.density.sup_ratio
    );
}
