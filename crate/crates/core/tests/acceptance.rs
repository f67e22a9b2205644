//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p polarctx-core --test acceptance`.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use polarctx_core::context::{self, Configuration};
use polarctx_core::gf2::{self, BitMatrix, BitVector, Solution};
use polarctx_core::hexagon::{self, Embedding, OrbitDatabase};
use polarctx_core::{context_sign, PauliObservable, PolarSpace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct World {
    w52: PolarSpace,
    doily: PolarSpace,
    classical: OrbitDatabase,
    skew: OrbitDatabase,
    orbit_time: Duration,
}

fn obs(s: &str) -> PauliObservable {
    s.parse().expect("label")
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:?}, limit {limit:?}"))
    }
}

fn c1_space_counts() -> Outcome {
    let start = Instant::now();
    let w5 = PolarSpace::build(3).map_err(|e| e.to_string())?;
    within(start.elapsed(), Duration::from_secs(1), "W(5,2)")?;
    let counts = (w5.n_points(), w5.lines().len(), w5.planes().len());
    ensure!(counts == (63, 315, 135), "W(5,2) counts {counts:?}");
    let start = Instant::now();
    let w3 = PolarSpace::build(2).map_err(|e| e.to_string())?;
    within(start.elapsed(), Duration::from_secs(1), "W(3,2)")?;
    ensure!((w3.n_points(), w3.lines().len()) == (15, 15), "W(3,2) counts");
    Ok("63/315/135 and 15/15".into())
}

fn c2_classical(world: &World) -> Outcome {
    let start = Instant::now();
    let quadric = hexagon::build_quadric();
    ensure!(quadric.len() == 63, "quadric has {} points", quadric.len());
    let filtered = hexagon::classical_quadric_lines();
    ensure!(filtered.len() == 63, "{} Plücker lines", filtered.len());
    let copy = hexagon::classical_hexagon(&world.w52).map_err(|e| e.to_string())?;
    let lines = copy.line_indices();
    let (girth, diameter) = hexagon::incidence_girth_and_diameter(&world.w52, &lines);
    ensure!(girth == Some(12) && diameter == Some(6), "girth {girth:?} diameter {diameter:?}");
    ensure!(hexagon::is_generalized_hexagon(&world.w52, &lines), "not 3-regular hexagon");
    let sig = hexagon::coplanarity_signature(&world.w52, &copy);
    ensure!(sig == 63, "signature {sig}");
    within(start.elapsed(), Duration::from_secs(5), "classical construction")?;
    Ok("63 quadric points, 63 lines, girth 12, signature 63".into())
}

fn c3_skew(world: &World) -> Outcome {
    let w = &world.w52;
    let images: HashSet<_> = hexagon::build_quadric()
        .into_iter()
        .map(hexagon::coolsaet_map)
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure!(images.len() == 63, "ε hits {} points", images.len());
    let copy = hexagon::skew_hexagon(w).map_err(|e| e.to_string())?;
    ensure!(hexagon::is_generalized_hexagon(w, &copy.line_indices()), "skew copy invalid");
    let sig = hexagon::coplanarity_signature(w, &copy);
    ensure!(sig == 15, "signature {sig}");

    let line = |labels: [&str; 3]| -> Result<u32, String> {
        let pts = labels.map(|s| w.point_of(&obs(s)).expect("point"));
        w.line_of(pts).ok_or_else(|| format!("{labels:?} is not a line"))
    };
    let l1 = line(["XXX", "XYY", "IZZ"])?;
    let l2 = line(["XXX", "ZZI", "YYX"])?;
    let l3 = line(["XXX", "IYZ", "XZY"])?;
    let coplanar = |a: u32, b: u32| {
        let pts: Vec<u32> = w.line(a).points().into_iter().chain(w.line(b).points()).collect();
        w.plane_containing(&pts).is_some()
    };
    ensure!(coplanar(l1, l2), "first two lines not coplanar");
    ensure!(!coplanar(l1, l3) && !coplanar(l2, l3), "third line shares a plane");
    let all: Vec<u32> = [l1, l2, l3].iter().flat_map(|&l| w.line(l).points()).collect();
    ensure!(w.plane_containing(&all).is_none(), "all three coplanar");
    let holders = world
        .skew
        .copies
        .iter()
        .filter(|c| [l1, l2, l3].iter().all(|&l| c.contains(&(l as u16))))
        .count();
    ensure!(holders > 0, "no skew copy carries the three lines through XXX");
    ensure!(
        !world.classical.copies.iter().any(|c| [l1, l2, l3].iter().all(|&l| c.contains(&(l as u16)))),
        "a classical copy carries the three lines through XXX"
    );
    Ok(format!("ε bijective, signature 15, XXX lines in {holders} skew copies, only first two coplanar"))
}

fn c4_orbits(world: &World) -> Outcome {
    ensure!(world.classical.len() == 120, "classical orbit {}", world.classical.len());
    ensure!(world.skew.len() == 7560, "skew orbit {}", world.skew.len());
    ensure!(
        world.classical.copies.iter().all(|c| !world.skew.contains(c)),
        "orbits intersect"
    );
    within(world.orbit_time, Duration::from_secs(600), "orbit closure")?;
    Ok(format!("120 + 7560 copies, disjoint, {:.2?}", world.orbit_time))
}

fn verdict(space: &PolarSpace, lines: &[u32]) -> Result<bool, String> {
    let config = context::lines_configuration(space, lines).map_err(|e| e.to_string())?;
    let report = context::is_contextual(&config);
    if let Some(y) = &report.certificate {
        let (a, b) = context::build_system(&config);
        // recheck by hand: the selected rows cancel and their signs do not
        let mut acc = vec![false; a.n_cols()];
        let mut rhs = false;
        for i in y.iter_ones() {
            for c in a.row(i).iter_ones() {
                acc[c] ^= true;
            }
            rhs ^= b.get(i);
        }
        if acc.iter().any(|&x| x) || !rhs {
            return Err("certificate fails".into());
        }
    }
    Ok(report.contextual)
}

fn c5_table1(world: &World) -> Outcome {
    let start = Instant::now();
    let w = &world.w52;
    let count = |db: &OrbitDatabase, complement: bool| -> Result<(usize, usize), String> {
        let verdicts: Vec<bool> = db
            .copies
            .par_iter()
            .map(|c| {
                let copy = hexagon::HexagonCopy::new(c.clone(), db.embedding);
                let lines = if complement {
                    hexagon::complement(w, &copy)
                } else {
                    copy.line_indices()
                };
                verdict(w, &lines)
            })
            .collect::<Result<_, _>>()?;
        let yes = verdicts.iter().filter(|&&v| v).count();
        Ok((yes, verdicts.len()))
    };
    let rows = [
        ("H_C", count(&world.classical, false)?, (0, 120)),
        ("H_S", count(&world.skew, false)?, (0, 7560)),
        ("complement H_C", count(&world.classical, true)?, (0, 120)),
        ("complement H_S", count(&world.skew, true)?, (7560, 7560)),
    ];
    for (name, got, want) in rows {
        ensure!(got == want, "{name}: {} contextual of {}, expected {} of {}", got.0, got.1, want.0, want.1);
    }
    within(start.elapsed(), Duration::from_secs(900), "table 1")?;
    Ok(format!("No/No/No/Yes on 120/7560/120/7560 copies, {:.2?}", start.elapsed()))
}

/// Minimum number of violated contexts over every ±1 assignment, straight
/// from the observables' products.
fn brute_force_degree(config: &Configuration) -> usize {
    let n = config.observables().len();
    (0u64..1 << n)
        .map(|assignment| {
            config
                .contexts()
                .iter()
                .zip(config.signs())
                .filter(|(ctx, sign)| {
                    let product: i8 = ctx.iter().map(|&p| if assignment >> p & 1 == 1 { -1 } else { 1 }).product();
                    product != sign.value()
                })
                .count()
        })
        .min()
        .expect("non-empty range")
}

fn c6_canonical_proofs() -> Outcome {
    let start = Instant::now();
    for (name, config, size) in [
        ("square", context::peres_mermin_square(), 9),
        ("pentagram", context::mermin_pentagram(), 10),
    ] {
        ensure!(config.observables().len() == size, "{name} size");
        ensure!(context::is_contextual(&config).contextual, "{name} not contextual");
        let oracle = brute_force_degree(&config);
        let (a, b) = context::build_system(&config);
        let coset = gf2::coset_min_weight(&a, &b, gf2::DEFAULT_DEGREE_CAP).map_err(|e| e.to_string())?;
        ensure!(oracle == 1 && coset == 1, "{name}: oracle {oracle}, coset {coset}");
    }
    within(start.elapsed(), Duration::from_secs(1), "canonical proofs")?;
    Ok("both contextual, degree 1 by 2^9 / 2^10 brute force and coset weight".into())
}

fn c7_doily_facts(world: &World) -> Outcome {
    let doily: Vec<u32> = (0..15).collect();
    let config = context::lines_configuration(&world.doily, &doily).map_err(|e| e.to_string())?;
    ensure!(config.negative_count() == 3, "{} negative doily lines", config.negative_count());
    ensure!(context::is_contextual(&config).contextual, "doily not contextual");
    let all: Vec<u32> = (0..315).collect();
    ensure!(verdict(&world.w52, &all)?, "W(5,2) not contextual");
    Ok("3 negative lines; W(3,2) and W(5,2) contextual".into())
}

fn c8_grid_census(world: &World) -> Outcome {
    let grids = context::enumerate_grids(&world.doily).map_err(|e| e.to_string())?;
    ensure!(grids.len() == 10, "{} grids", grids.len());
    let all_lines: Vec<u32> = (0..15).collect();
    for g in &grids {
        let points: Vec<u32> = g
            .iter()
            .flat_map(|&l| world.doily.line(l).points())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        ensure!(points.len() == 9, "grid with {} points", points.len());
        ensure!(world.doily.is_geometric_hyperplane(&points, &all_lines), "grid is not a hyperplane");
        let config = context::lines_configuration(&world.doily, g).map_err(|e| e.to_string())?;
        let neg = config.negative_count();
        ensure!(neg == 1 || neg == 3, "grid with {neg} negative contexts");
        ensure!(context::is_contextual(&config).contextual, "grid not contextual");
    }
    Ok("10 grids, all hyperplanes with 1 or 3 negative contexts".into())
}

fn c9_perp_hyperplanes(world: &World) -> Outcome {
    let w = &world.w52;
    for copy in [world.classical.copy(0), world.skew.copy(0)] {
        let lines = copy.line_indices();
        for p in 0..63 {
            let perp = w.perp_set(p);
            ensure!(perp.len() == 31 && perp.contains(&p), "perp of {p} has {} points", perp.len());
            ensure!(w.is_geometric_hyperplane(&perp, &lines), "perp of {} not a hyperplane of a {} copy", w.label(p), copy.embedding);
        }
    }
    Ok("63 perps × 2 embeddings are 31-point hyperplanes".into())
}

fn c10_properties(world: &World) -> Outcome {
    let w = &world.w52;
    let mut rng = ChaCha8Rng::seed_from_u64(2022);

    let mut contexts: Vec<Vec<PauliObservable>> = w.lines().iter().map(|l| l.points().map(|p| *w.label(p)).to_vec()).collect();
    contexts.extend(w.planes().iter().map(|pl| pl.points().map(|p| *w.label(p)).to_vec()));
    let affine = context::enumerate_four_element_contexts(w).map_err(|e| e.to_string())?;
    contexts.extend(affine.iter().map(|c| c.points.map(|p| *w.label(p)).to_vec()));
    for _ in 0..1000 {
        let ctx = contexts.choose(&mut rng).expect("non-empty");
        let mut shuffled = ctx.clone();
        shuffled.shuffle(&mut rng);
        ensure!(context_sign(ctx).ok() == context_sign(&shuffled).ok(), "sign changed under shuffle");
    }

    for _ in 0..1000 {
        let [r, p, q] = [0; 3].map(|_| rng.gen_range(0..63u32));
        let (tp, tq) = (w.transvect_point(r, p), w.transvect_point(r, q));
        ensure!(w.form_between(tp, tq) == w.form_between(p, q), "transvection broke the form");
    }

    for _ in 0..300 {
        let rows = rng.gen_range(1..=320);
        let cols = rng.gen_range(1..=64);
        let density = [0.02, 0.1, 0.5][rng.gen_range(0..3)];
        let a = BitMatrix::from_rows(
            cols,
            (0..rows)
                .map(|_| BitVector::from_bools(&(0..cols).map(|_| rng.gen_bool(density)).collect::<Vec<_>>()))
                .collect(),
        )
        .map_err(|e| e.to_string())?;
        let b = BitVector::from_bools(&(0..rows).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>());
        let (rank, aug) = (a.rank(), a.augment(&b).map_err(|e| e.to_string())?.rank());
        match gf2::solve(&a, &b).map_err(|e| e.to_string())? {
            Solution::Consistent(x) => {
                ensure!(aug == rank && a.mul_vec(&x).map_err(|e| e.to_string())? == b, "bad solution");
            }
            Solution::Inconsistent(y) => {
                ensure!(aug == rank + 1 && gf2::verify_certificate(&a, &b, &y), "bad certificate");
            }
        }
    }

    for _ in 0..1000 {
        let p = rng.gen_range(0..63u32);
        let lines: Vec<u32> = if rng.gen_bool(0.5) {
            world.skew.copy(rng.gen_range(0..world.skew.len())).line_indices()
        } else {
            let mut ls: Vec<u32> = (0..315).filter(|_| rng.gen_bool(0.2)).collect();
            ls.sort_unstable();
            ls
        };
        let twice = w.apply_transvection_to_lineset(p, &w.apply_transvection_to_lineset(p, &lines));
        ensure!(twice == lines, "transvection is not an involution on line sets");
    }
    Ok("1000 shuffles, 1000 form triples, 300 random systems, 1000 involutions".into())
}

fn c11_pentagrams(world: &World) -> Outcome {
    let start = Instant::now();
    let w = &world.w52;
    let census = context::count_pentagrams(w, None).map_err(|e| e.to_string())?;
    ensure!(census.count() == 12096, "{} pentagrams", census.count());
    let bad = (0..census.count())
        .into_par_iter()
        .filter(|&i| {
            let config = census.configuration(w, i).expect("valid pentagram");
            !(context::is_contextual(&config).contextual && config.negative_count() % 2 == 1)
        })
        .count();
    ensure!(bad == 0, "{bad} pentagrams not contextual with odd negatives");
    let canonical = context::mermin_pentagram();
    let mut target: Vec<Vec<u32>> = canonical
        .contexts()
        .iter()
        .map(|c| {
            let mut pts: Vec<u32> = c.iter().map(|&p| w.point_of(&canonical.observables()[p as usize]).expect("point")).collect();
            pts.sort_unstable();
            pts
        })
        .collect();
    target.sort();
    let present = census.pentagrams.iter().any(|pg| {
        let mut ctxs: Vec<Vec<u32>> = pg.iter().map(|&c| census.contexts[c as usize].points.to_vec()).collect();
        ctxs.sort();
        ctxs == target
    });
    ensure!(present, "canonical pentagram missing");
    Ok(format!("12096 pentagrams, all contextual, {:.2?}", start.elapsed()))
}

fn excluded_complement_degree(world: &World) -> Outcome {
    let copy = world.skew.copy(0);
    let lines = hexagon::complement(&world.w52, &copy);
    let config = context::lines_configuration(&world.w52, &lines).map_err(|e| e.to_string())?;
    match context::degree(&config, gf2::DEFAULT_DEGREE_CAP) {
        Err(polarctx_core::Error::CapExceeded { rank, cap }) => Ok(format!("CapExceeded (rank {rank} > cap {cap})")),
        other => Err(format!("expected CapExceeded, got {other:?}")),
    }
}

fn run(id: &str, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
    match outcome {
        Ok(detail) => {
            println!("PASS [{id}] {name}: {detail}");
            true
        }
        Err(why) => {
            println!("FAIL [{id}] {name}: {why}");
            false
        }
    }
}

fn main() {
    let start = Instant::now();
    let w52 = PolarSpace::build(3).expect("W(5,2)");
    let doily = PolarSpace::build(2).expect("W(3,2)");
    let seeds = (hexagon::classical_hexagon(&w52), hexagon::skew_hexagon(&w52));
    let (Ok(classical_seed), Ok(skew_seed)) = seeds else {
        println!("FAIL [setup] seed construction: {seeds:?}");
        std::process::exit(1);
    };
    let orbit_start = Instant::now();
    let classical = hexagon::orbit_closure(&w52, &classical_seed, hexagon::DEFAULT_ORBIT_LIMIT).expect("classical orbit");
    let skew = hexagon::orbit_closure(&w52, &skew_seed, hexagon::DEFAULT_ORBIT_LIMIT).expect("skew orbit");
    assert_eq!(classical.embedding, Embedding::Classical);
    let world = World {
        w52,
        doily,
        classical,
        skew,
        orbit_time: orbit_start.elapsed(),
    };

    let results = [
        run("1", "space counts", c1_space_counts),
        run("2", "classical embedding", || c2_classical(&world)),
        run("3", "skew embedding", || c3_skew(&world)),
        run("4", "orbit sizes", || c4_orbits(&world)),
        run("5", "table 1 reproduction", || c5_table1(&world)),
        run("6", "canonical proofs", c6_canonical_proofs),
        run("7", "doily facts", || c7_doily_facts(&world)),
        run("8", "grid census", || c8_grid_census(&world)),
        run("9", "perp hyperplanes", || c9_perp_hyperplanes(&world)),
        run("10", "property suites", || c10_properties(&world)),
        run("11", "pentagram census", || c11_pentagrams(&world)),
        run("x", "complement degree is out of reach", || excluded_complement_degree(&world)),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!(
        "acceptance: {} passed, {failed} failed in {:.2?}",
        results.len() - failed,
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
