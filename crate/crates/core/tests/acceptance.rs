//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `--nocapture`, and in the captured output of any
//! failing test). Criteria 1-11 and 13 live here; criterion 12 (the figure
//! pipeline) exercises the CLI binary and lives in the CLI crate.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kappa_shapes::bkernel::{b_exact, b_kappa, b_kappa_row_sum};
use kappa_shapes::generators::{
    hilbert_landmarks, lemniscate_landmarks, logistic_landmarks, lorenz_landmarks,
    planar_graph_example_landmarks, polygon_landmarks, random_uniform_landmarks, star_landmarks,
    trefoil_landmarks, LemniscateVariant,
};
use kappa_shapes::geometry::{hull_2d, projected_crossings, weight_certificate_contains};
use kappa_shapes::scene::{Scene, SceneTopology};
use kappa_shapes::shape::{KappaFamily, LandmarkSet, Topology};

const KAPPA_SWEEP: [f64; 7] = [0.01, 0.1, 0.5, 1.0, 5.0, 10.0, 100.0];

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (&x, &y)| m.max((x - y).abs()))
}

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {id:02} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn paper_lorenz() -> LandmarkSet {
    lorenz_landmarks(10.0, 28.0, 8.0 / 3.0, 0.01, [2.5704, 3.6945, 16.4286], 1000).unwrap()
}

fn triangle(topology: Topology) -> LandmarkSet {
    LandmarkSet::new(
        vec![vec![0.0, 0.0], vec![4.0, 3.0], vec![7.0, 1.0]],
        topology,
    )
    .unwrap()
}

fn waveform(topology: Topology) -> LandmarkSet {
    LandmarkSet::from_scalars(&[1.0, 4.0, 2.0, 2.0, 1.0], topology).unwrap()
}

#[test]
fn criterion_01_kronecker_property() {
    let start = Instant::now();
    let mut ok = true;
    for n in 0i64..64 {
        for j in 0i64..64 {
            let expected = if n == j { 1.0 } else { 0.0 };
            if b_exact((n - j) as f64, 0.5) != expected {
                ok = false;
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        "exact kernel reproduces the Kronecker delta",
        ok,
        &format!("64x64 integer pairs, {elapsed:?}"),
    );
    assert!(ok);
    assert!(elapsed.as_secs_f64() < 1.0, "runtime budget 1 s exceeded");
}

#[test]
fn criterion_02_telescoping_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC2);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=64usize);
        let t = rng.gen_range(-10.0..(n as f64 + 10.0));
        let kappa = 10f64.powf(rng.gen_range(-3.0..3.0));
        let sum: f64 = (0..n).map(|j| b_kappa(t - j as f64, 0.5, kappa)).sum();
        let closed = b_kappa_row_sum(t, n, kappa);
        worst = worst.max((sum - closed).abs() / sum.abs().max(1.0));
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-12;
    report(
        2,
        "row sum telescopes to the closed form",
        pass,
        &format!("10^4 samples, worst scaled error {worst:.3e}, {elapsed:?}"),
    );
    assert!(pass);
    assert!(elapsed.as_secs_f64() < 5.0, "runtime budget 5 s exceeded");
}

#[test]
fn criterion_03_hull_containment_2d() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for i in 0..100u64 {
        let n = 3 + (i as usize * 7) % 18; // sizes 3..=20
        let set = random_uniform_landmarks(n, 2, 1000 + i).unwrap();
        let xy: Vec<[f64; 2]> = set.points().iter().map(|p| [p[0], p[1]]).collect();
        let hull = hull_2d(&xy).unwrap();
        let family = KappaFamily::new(set);
        let (t0, t1) = family.canonical_range();
        for &kappa in &KAPPA_SWEEP {
            let curve = family.sample(kappa, t0, t1.max(t0 + 1.0), 1000).unwrap();
            for s in &curve.samples {
                let d = hull.signed_distance([s.point[0], s.point[1]]);
                if d < 0.0 {
                    worst = worst.max(-d);
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-9;
    report(
        3,
        "evaluations stay inside the landmark hull",
        pass,
        &format!("100 seeded sets x 7 kappas x 1000 samples, worst violation {worst:.3e}, {elapsed:?}"),
    );
    assert!(pass);
    assert!(elapsed.as_secs_f64() < 30.0, "runtime budget 30 s exceeded");
}

#[test]
fn criterion_04_weight_certificate_3d() {
    let start = Instant::now();
    let mut worst_sum = 0.0f64;
    let mut worst_neg = 0.0f64;
    let mut all_certified = true;
    for set in [trefoil_landmarks(), paper_lorenz()] {
        let family = KappaFamily::new(set);
        let (t0, t1) = family.canonical_range();
        let span = t1 - t0;
        for &kappa in &KAPPA_SWEEP {
            for i in 0..1000 {
                let t = t0 + span * i as f64 / 999.0;
                let r = family.eval(t, kappa).unwrap();
                let sum: f64 = r.weights.iter().sum();
                worst_sum = worst_sum.max((sum - 1.0).abs());
                for &w in &r.weights {
                    if w < 0.0 {
                        worst_neg = worst_neg.max(-w);
                    }
                }
                all_certified &= weight_certificate_contains(&r, 1e-12);
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst_sum <= 1e-12 && worst_neg <= 1e-12 && all_certified;
    report(
        4,
        "3D weight certificates hold",
        pass,
        &format!(
            "trefoil + attractor, worst |sum-1| {worst_sum:.3e}, worst negative {worst_neg:.3e}, {elapsed:?}"
        ),
    );
    assert!(pass);
    assert!(elapsed.as_secs_f64() < 30.0, "runtime budget 30 s exceeded");
}

/// All example generators, with their topology.
fn all_generators() -> Vec<(&'static str, LandmarkSet)> {
    vec![
        ("polygon-3", polygon_landmarks(3).unwrap()),
        ("polygon-6", polygon_landmarks(6).unwrap()),
        ("star-6", star_landmarks(6).unwrap()),
        ("planar-graph", planar_graph_example_landmarks()),
        (
            "lemniscate-square",
            lemniscate_landmarks(LemniscateVariant::Square4),
        ),
        (
            "lemniscate-six",
            lemniscate_landmarks(LemniscateVariant::SixPoint),
        ),
        ("hilbert-5", hilbert_landmarks(5).unwrap()),
        ("logistic", logistic_landmarks(3.5, 0.3, 150).unwrap()),
        ("lorenz", paper_lorenz()),
        ("trefoil", trefoil_landmarks()),
        ("random-50", random_uniform_landmarks(50, 2, 3).unwrap()),
    ]
}

fn recovery_worst_error(set: &LandmarkSet, kappa: f64) -> f64 {
    let family = KappaFamily::new(set.clone());
    let mut worst = 0.0f64;
    for n in 0..family.len() {
        let r = family.eval(n as f64, kappa).unwrap();
        worst = worst.max(linf(&r.point, family.landmarks().point(n)));
    }
    worst
}

#[test]
fn criterion_05_landmark_recovery_open_generators() {
    let start = Instant::now();
    let mut pass = true;
    let mut lines = Vec::new();
    for (name, set) in all_generators() {
        if set.topology() != Topology::Open {
            continue;
        }
        let tol = 1e-6 * (1.0 + set.max_abs_coord());
        let worst = recovery_worst_error(&set, 0.05);
        let ok = worst <= tol;
        pass &= ok;
        lines.push(format!("{name} worst {worst:.3e} tol {tol:.3e}"));
    }
    let elapsed = start.elapsed();
    report(
        5,
        "landmark recovery at kappa=0.05 (open generators)",
        pass,
        &format!("{}; {elapsed:?}", lines.join("; ")),
    );
    assert!(pass);
    assert!(elapsed.as_secs_f64() < 10.0, "runtime budget 10 s exceeded");
}

/// The closed-topology half of the recovery criterion, asserted at the same
/// fixed kappa = 0.05 and tolerance as the open half.
///
/// This is expected to fail, and the failure is a property of the exact
/// mathematics, not of this implementation: the periodic kernel evaluates
/// the box at sine-compressed offsets, so the distance-one neighbour enters
/// at (sin(pi/N) - sin(pi/2N))/kappa instead of (1/2)/kappa. At N = 9
/// (the knot) that exponent is ~3.4 rather than 10, leaving a neighbour
/// weight of ~1.2e-3 and a recovery error around 1e-3 - three orders of
/// magnitude above the 2e-6 tolerance. Closed-family recovery at the
/// documented default kappa = 1e-3 is exact to rounding for every one of
/// these sets (see `closed_recovery_succeeds_at_default_kappa`), so the
/// recovery limit itself is verified; only the fixed 0.05 scale is
/// unreachable for periodic kernels with N >= 4.
#[test]
fn criterion_05_landmark_recovery_closed_generators() {
    let start = Instant::now();
    let mut pass = true;
    let mut lines = Vec::new();
    for (name, set) in all_generators() {
        if set.topology() != Topology::Closed {
            continue;
        }
        let tol = 1e-6 * (1.0 + set.max_abs_coord());
        let worst = recovery_worst_error(&set, 0.05);
        let ok = worst <= tol;
        pass &= ok;
        lines.push(format!(
            "{name} N={} worst {worst:.3e} tol {tol:.3e} {}",
            set.len(),
            if ok { "ok" } else { "EXCEEDED" }
        ));
    }
    let elapsed = start.elapsed();
    report(
        5,
        "landmark recovery at kappa=0.05 (closed generators)",
        pass,
        &format!("{}; {elapsed:?}", lines.join("; ")),
    );
    assert!(elapsed.as_secs_f64() < 10.0, "runtime budget 10 s exceeded");
    assert!(
        pass,
        "fixed kappa=0.05 cannot saturate the periodic kernel; see test doc comment"
    );
}

/// Companion check: the recovery limit holds for every generator at the
/// documented default recovery scale.
#[test]
fn closed_recovery_succeeds_at_default_kappa() {
    for (name, set) in all_generators() {
        let tol = 1e-6 * (1.0 + set.max_abs_coord());
        let worst = recovery_worst_error(&set, 1e-3);
        assert!(
            worst <= tol,
            "{name}: worst recovery error {worst:.3e} at default kappa"
        );
    }
}

#[test]
fn criterion_06_centroid_collapse() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut sets: Vec<LandmarkSet> = Vec::new();
    for topology in [Topology::Open, Topology::Closed] {
        sets.push(triangle(topology));
        sets.push(waveform(topology));
        let hexagon = polygon_landmarks(6).unwrap();
        sets.push(LandmarkSet::new(hexagon.points().to_vec(), topology).unwrap());
    }
    for set in sets {
        let family = KappaFamily::new(set);
        let centroid = family.centroid();
        let curve = family.sample_default(1e8).unwrap();
        for s in &curve.samples {
            worst = worst.max(linf(&s.point, &centroid));
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-5;
    report(
        6,
        "kappa=1e8 collapses onto the centroid",
        pass,
        &format!("open+closed triangle/waveform/hexagon, worst {worst:.3e}, {elapsed:?}"),
    );
    assert!(pass);
    assert!(elapsed.as_secs_f64() < 5.0, "runtime budget 5 s exceeded");
}

#[test]
fn criterion_07_periodicity_and_cyclic_shift() {
    let start = Instant::now();
    let family = KappaFamily::new(triangle(Topology::Closed));
    let mut worst_periodic = 0.0f64;
    let mut worst_shift = 0.0f64;
    for &kappa in &[0.01, 0.3, 0.5, 1.0] {
        for i in 0..=300 {
            let t = 3.0 * i as f64 / 300.0;
            let base = family.eval(t, kappa).unwrap().point;
            for k in -3i32..=3 {
                let moved = family.eval(t + 3.0 * k as f64, kappa).unwrap().point;
                worst_periodic = worst_periodic.max(linf(&base, &moved));
            }
            for m in 1..3usize {
                let cycled = KappaFamily::new(family.landmarks().cycled(m));
                let a = cycled.eval(t, kappa).unwrap().point;
                let b = family.eval(t + m as f64, kappa).unwrap().point;
                worst_shift = worst_shift.max(linf(&a, &b));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst_periodic <= 1e-12 && worst_shift <= 1e-12;
    report(
        7,
        "closed periodicity and cyclic-shift equivariance",
        pass,
        &format!("worst periodicity {worst_periodic:.3e}, worst shift {worst_shift:.3e}, {elapsed:?}"),
    );
    assert!(pass);
    assert!(elapsed.as_secs_f64() < 5.0, "runtime budget 5 s exceeded");
}

#[test]
fn criterion_08_linear_equivariance() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC8);
    let mut worst = 0.0f64;

    let cases: Vec<(KappaFamily, usize)> = vec![
        (KappaFamily::new(triangle(Topology::Closed)), 2),
        (
            KappaFamily::new(random_uniform_landmarks(12, 2, 99).unwrap()),
            2,
        ),
        (KappaFamily::new(trefoil_landmarks()), 3),
    ];
    for (family, dim) in &cases {
        for _ in 0..100 {
            let matrix: Vec<Vec<f64>> = (0..*dim)
                .map(|_| (0..*dim).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect();
            let transformed = family.transform(&matrix).unwrap();
            for i in 0..10 {
                let t = 0.3 * i as f64;
                for &kappa in &[0.05, 0.5, 5.0] {
                    let direct = transformed.eval(t, kappa).unwrap().point;
                    let base = family.eval(t, kappa).unwrap().point;
                    let mapped: Vec<f64> = matrix
                        .iter()
                        .map(|row| row.iter().zip(&base).map(|(&m, &x)| m * x).sum())
                        .collect();
                    let scale = mapped.iter().fold(1.0f64, |m, &c| m.max(c.abs()));
                    worst = worst.max(linf(&direct, &mapped) / scale);
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-9;
    report(
        8,
        "linear transforms commute with evaluation",
        pass,
        &format!("100 random 2x2 and 3x3 matrices, worst relative {worst:.3e}, {elapsed:?}"),
    );
    assert!(pass);
    assert!(elapsed.as_secs_f64() < 10.0, "runtime budget 10 s exceeded");
}

/// The kernel depends on its arguments only through x/kappa and y/kappa,
/// so scaling x, y and kappa together is an exact identity. (Scaling only
/// the arguments, or only kappa, changes the value: the two sides relate
/// through inverse factors.)
#[test]
fn criterion_09_kernel_scaling_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC9);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let x = rng.gen_range(-5.0..5.0);
        let y = rng.gen_range(-2.0..2.0);
        let kappa = 10f64.powf(rng.gen_range(-3.0..3.0));
        let a = 10f64.powf(rng.gen_range(-3.0..3.0));
        let lhs = b_kappa(a * x, a * y, a * kappa);
        let rhs = b_kappa(x, y, kappa);
        worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1.0));
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-13;
    report(
        9,
        "kernel scale invariance",
        pass,
        &format!("10^4 samples, worst scaled error {worst:.3e}, {elapsed:?}"),
    );
    assert!(pass);
    assert!(elapsed.as_secs_f64() < 2.0, "runtime budget 2 s exceeded");
}

/// Exact-integer oracle for the substitution system: coordinates are odd
/// numerators over 2^q, children computed without rounding.
fn hilbert_oracle(q: u32) -> Vec<(i64, i64)> {
    let mut gen: Vec<(i64, i64)> = vec![(0, 0)];
    for level in 0..q {
        let scale = 1i64 << level; // current denominator 2^level
        let mut next = Vec::with_capacity(4 * gen.len());
        // numerator transform for (v - 1)/2 at denominator doubling: v - scale
        for &(x, y) in &gen {
            next.push((y - scale, x - scale));
        }
        for &(x, y) in &gen {
            next.push((x - scale, y + scale));
        }
        for &(x, y) in &gen {
            next.push((x + scale, y + scale));
        }
        for &(x, y) in &gen {
            next.push((scale - y, -scale - x));
        }
        gen = next;
    }
    gen
}

#[test]
fn criterion_10_substitution_generator() {
    let start = Instant::now();
    let q1 = hilbert_landmarks(1).unwrap();
    let q1_ok = q1.points()
        == &[
            vec![-0.5, -0.5],
            vec![-0.5, 0.5],
            vec![0.5, 0.5],
            vec![0.5, -0.5],
        ];

    let q5 = hilbert_landmarks(5).unwrap();
    let count_ok = q5.len() == 1024;
    let scale = (1i64 << 5) as f64;
    let mut dyadic_ok = true;
    for p in q5.points() {
        for &c in p {
            let scaled = c * scale;
            dyadic_ok &= scaled == scaled.round() && (scaled as i64) % 2 != 0;
        }
    }
    let mut spacing_ok = true;
    let expected_spacing = (2.0f64).powi(-4);
    for w in q5.points().windows(2) {
        let d = linf(&w[0], &w[1]);
        spacing_ok &= d == expected_spacing;
    }
    let oracle = hilbert_oracle(5);
    let mut oracle_ok = oracle.len() == q5.len();
    for (p, &(ox, oy)) in q5.points().iter().zip(&oracle) {
        oracle_ok &= p[0] * scale == ox as f64 && p[1] * scale == oy as f64;
    }
    let elapsed = start.elapsed();
    let pass = q1_ok && count_ok && dyadic_ok && spacing_ok && oracle_ok;
    report(
        10,
        "substitution generator matches the exact oracle",
        pass,
        &format!(
            "q1 {q1_ok}, count {count_ok}, dyadic {dyadic_ok}, spacing {spacing_ok}, oracle {oracle_ok}, {elapsed:?}"
        ),
    );
    assert!(pass);
    assert!(elapsed.as_secs_f64() < 5.0, "runtime budget 5 s exceeded");
}

#[test]
fn criterion_11_knot_observable_small_kappa() {
    let start = Instant::now();
    let family = KappaFamily::new(trefoil_landmarks());
    let curve = family.sample(0.01, 0.0, 9.0, 2001).unwrap();
    let r = projected_crossings(&curve).unwrap();
    let pass = r.crossing_count == 3;

    // Reported, not asserted: the sweep and where the count first reaches 0.
    let mut first_zero = None;
    let mut sweep = Vec::new();
    for &kappa in &[0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0] {
        let c = family.sample(kappa, 0.0, 9.0, 2001).unwrap();
        let count = projected_crossings(&c).unwrap().crossing_count;
        if count == 0 && first_zero.is_none() {
            first_zero = Some(kappa);
        }
        sweep.push(format!("{kappa}:{count}"));
    }
    let elapsed = start.elapsed();
    report(
        11,
        "knotted shape shows 3 projected crossings at kappa=0.01",
        pass,
        &format!(
            "sweep {{{}}}, first zero at kappa={:?}, {elapsed:?}",
            sweep.join(", "),
            first_zero
        ),
    );
    assert!(pass);
    assert!(elapsed.as_secs_f64() < 10.0, "runtime budget 10 s exceeded");
}

/// The unknotted-side half of the crossing criterion, asserted at
/// kappa = 0.7 with an expected count of zero.
///
/// This is expected to fail, and the discrepancy is geometric, not
/// numerical: at kappa = 0.7 the smoothed curve still folds back on itself
/// once per lobe, and the xy-projection of that fold self-intersects in a
/// pair of shallow (~14 degree) but fully transverse crossings of width
/// ~5e-3. The intersection parameters converge under sample refinement
/// (501 through 8001 samples agree to 1e-4), so the count of 2 is a true
/// property of the curve. The knot itself *is* undone - a closed diagram
/// with fewer than three crossings is necessarily the unknot - and the
/// count reaches zero by kappa ~= 0.8 (see the sweep printed by the
/// small-kappa half).
#[test]
fn criterion_11_knot_observable_large_kappa() {
    let start = Instant::now();
    let family = KappaFamily::new(trefoil_landmarks());
    let curve = family.sample(0.7, 0.0, 9.0, 2001).unwrap();
    let r = projected_crossings(&curve).unwrap();
    let pass = r.crossing_count == 0;
    let elapsed = start.elapsed();
    report(
        11,
        "smoothed shape shows 0 projected crossings at kappa=0.7",
        pass,
        &format!(
            "count {} at {:?}, {elapsed:?}",
            r.crossing_count,
            r.crossings
                .iter()
                .map(|c| (c.t_a, c.t_b))
                .collect::<Vec<_>>()
        ),
    );
    assert!(elapsed.as_secs_f64() < 10.0, "runtime budget 10 s exceeded");
    assert!(
        pass,
        "the projection keeps a residual 2-crossing fold at kappa=0.7; see test doc comment"
    );
}

#[test]
fn criterion_13_scene_limits() {
    let start = Instant::now();
    let mut worst_recover = 0.0f64;
    let mut worst_average = 0.0f64;
    for topology in [SceneTopology::TypeI, SceneTopology::TypeII] {
        let members: Vec<KappaFamily> = vec![
            KappaFamily::new(polygon_landmarks(3).unwrap()),
            KappaFamily::new(polygon_landmarks(4).unwrap()),
            KappaFamily::new(polygon_landmarks(5).unwrap()),
        ];
        let scene = Scene::from_families(
            members.iter().map(|f| (f.clone(), 0.3)).collect(),
            topology,
        )
        .unwrap();
        for i in 0..=40 {
            let t = 3.0 * i as f64 / 40.0;
            for (m, member) in members.iter().enumerate() {
                let recovered = scene.eval(t, m as f64, 1e-3).unwrap().point;
                let direct = member.eval(t, 0.3).unwrap().point;
                worst_recover = worst_recover.max(linf(&recovered, &direct));
            }
            let averaged = scene.eval(t, 1.0, 1e8).unwrap().point;
            let mut mean = vec![0.0; 2];
            for member in &members {
                let e = member.eval(t, 0.3).unwrap().point;
                mean[0] += e[0] / 3.0;
                mean[1] += e[1] / 3.0;
            }
            worst_average = worst_average.max(linf(&averaged, &mean));
        }
    }
    let elapsed = start.elapsed();
    let pass = worst_recover <= 1e-6 && worst_average <= 1e-5;
    report(
        13,
        "scene recovery and averaging limits",
        pass,
        &format!(
            "3-member scenes, worst recovery {worst_recover:.3e}, worst average {worst_average:.3e}, {elapsed:?}"
        ),
    );
    assert!(pass);
    assert!(elapsed.as_secs_f64() < 5.0, "runtime budget 5 s exceeded");
}
