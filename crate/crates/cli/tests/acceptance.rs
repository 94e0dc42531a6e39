//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::panic;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use helly_core::census::{
    c_z2_profile, census_up_to, expand_to_maximal, maximal_membership, parse_census_file,
    CensusCache, CensusFile, PolygonCensus, RationalPolygon, Z2Profile, Q,
};
use helly_core::constants::{
    verify_andrews_estimates, verify_upper_chain, Verdict, DEFAULT_PRECISION,
};
use helly_core::engine::{
    bound_audit, c_direct_from, c_from_g, enumerate_convex_subsets, g_profile_from, ExtInt,
};
use helly_core::lattice::{
    canonical_form_2d, closure, convex_hull, planar, FiniteSite, LatticePoint,
};
use helly_core::witnesses::{
    lower_bound_witness, small_k_witness, verify_witness, ConstructionRecipe,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn helly(args: &[&str]) -> (i32, Vec<u8>, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_helly"))
        .args(args)
        .env_remove("HELLY_CENSUS_CACHE")
        .output()
        .expect("run helly");
    (out.status.code().unwrap_or(-1), out.stdout, start.elapsed())
}

fn csv_column(stdout: &[u8], col: usize) -> Vec<String> {
    String::from_utf8_lossy(stdout)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(col).unwrap_or_default().to_string())
        .collect()
}

fn fin(v: &[i64]) -> Vec<ExtInt> {
    v.iter().copied().map(ExtInt::Fin).collect()
}

fn z2_table(k: usize) -> (PolygonCensus, Z2Profile) {
    let census = census_up_to(k, None, |_, _, _| {}).expect("census");
    let z = c_z2_profile(k, &census).expect("profile");
    (census, z)
}

fn grid_profile() -> Outcome {
    let (code, out, t) = helly(&["grid", "--dims", "3x3", "--kmax", "5", "--format", "csv"]);
    let expected = "k,g,c\n0,4,4\n1,6,6\n2,5,5\n3,5,5\n4,-inf,4\n5,4,4\n";
    ensure(code == 0, || format!("exit code {code}"))?;
    ensure(out == expected.as_bytes(), || {
        format!("output {:?}", String::from_utf8_lossy(&out))
    })?;
    ensure(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!(
        "g = (4,6,5,5,-inf,4), c = (4,6,5,5,4,4) in {:.3}s",
        t.as_secs_f64()
    ))
}

fn two_oracles() -> Outcome {
    let sites: [&[u32]; 4] = [&[2, 2], &[3, 3], &[4, 3], &[2, 2, 2]];
    let mut compared = 0;
    for dims in sites {
        let site = FiniteSite::grid(dims).map_err(|e| e.to_string())?;
        let sets = enumerate_convex_subsets(&site).map_err(|e| e.to_string())?;
        let n = site.len();
        let p = c_from_g(&g_profile_from(&site, &sets, n, None));
        for k in 0..=n {
            let direct = c_direct_from(&sets, k);
            ensure(direct == p.c[k], || {
                format!("{dims:?} k={k}: direct {direct} vs recursion {}", p.c[k])
            })?;
            if direct.is_finite() {
                let hi = ExtInt::max_of(p.g[..=k].iter().copied());
                ensure(p.g[k] <= direct && direct <= hi, || {
                    format!("{dims:?} k={k}: {} <= {direct} <= {hi} fails", p.g[k])
                })?;
            }
            compared += 1;
        }
    }
    Ok(format!(
        "{compared} (site, k) pairs agree and satisfy g <= c <= max g"
    ))
}

fn z2_table_check() -> Outcome {
    let (code, out, t1) = helly(&["census", "--k", "10", "--threads", "1"]);
    ensure(code == 0, || format!("exit code {code}"))?;
    let want: Vec<String> = [4, 6, 6, 6, 8, 7, 8, 9, 8, 8, 10]
        .iter()
        .map(i64::to_string)
        .collect();
    ensure(
        csv_column(&out, 1) == want && csv_column(&out, 2) == want,
        || format!("table {:?}", String::from_utf8_lossy(&out)),
    )?;
    let (_, z) = z2_table(10);
    ensure(z.drops == vec![5, 8], || format!("drops {:?}", z.drops))?;
    ensure(t1 < Duration::from_secs(30 * 60), || format!("took {t1:?}"))?;
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let table = format!(
        "table and drops {{5,8}} match, {:.2}s on one thread",
        t1.as_secs_f64()
    );
    if cores < 2 {
        return Err(format!(
            "{table}; parallel speedup not demonstrable: only 1 core available"
        ));
    }
    let threads = cores.to_string();
    let (_, out_n, tn) = helly(&["census", "--k", "10", "--threads", &threads]);
    ensure(out_n == out, || {
        "output differs between thread counts".into()
    })?;
    let speedup = t1.as_secs_f64() / tn.as_secs_f64();
    ensure(speedup > 1.1, || {
        format!("{table}; speedup {speedup:.2} with {cores} threads")
    })?;
    Ok(format!(
        "{table}; speedup {speedup:.2} with {cores} threads"
    ))
}

fn small_k() -> Outcome {
    let start = Instant::now();
    for n in 2..=5 {
        for k in 0..=4 {
            let r = ConstructionRecipe::for_k(n, k).unwrap();
            small_k_witness(&r).map_err(|e| format!("n={n} k={k}: {e}"))?;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("20 polytopes verified in {:.2}s", t.as_secs_f64()))
}

fn small_k_tight() -> Outcome {
    let (_, z) = z2_table(4);
    ensure(z.profile.c == fin(&[4, 6, 6, 6, 8]), || {
        format!("c = {:?}", z.profile.c)
    })?;
    for k in 0..=4 {
        let r = ConstructionRecipe::for_k(2, k).unwrap();
        ensure(
            ExtInt::Fin(r.expected_vertices() as i64) == z.profile.c[k],
            || format!("k={k}: recipe has {} vertices", r.expected_vertices()),
        )?;
    }
    Ok("c(Z^2,0..4) = (4,6,6,6,8) = (2^n, 2^{n+1}-2 (x3), 2^{n+1})".into())
}

fn lower_bound() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut ks: Vec<u64> = vec![32, 100, 500, 10_000];
    ks.extend((0..50).map(|_| rng.gen_range(4..=10_000)));
    for &k in &ks {
        let mut w = lower_bound_witness(2, k).map_err(|e| format!("k={k}: {e}"))?;
        let r = verify_witness(&w).map_err(|e| format!("k={k}: {e}"))?;
        w.verified = true;
        if w.degenerate {
            continue;
        }
        ensure(r.vertices == 2 * u128::from(w.t), || {
            format!("k={k}: {} vertices", r.vertices)
        })?;
        ensure(r.nonvertex == u128::from(w.k_prime), || {
            format!("k={k}: {} non-vertex", r.nonvertex)
        })?;
        ensure(k - w.k_prime <= w.t, || {
            format!("k={k}: k - k' = {}", k - w.k_prime)
        })?;
    }
    let (_, z) = z2_table(10);
    for k in 4..=10u64 {
        let w = lower_bound_witness(2, k).map_err(|e| e.to_string())?;
        ensure(
            ExtInt::Fin(w.helly_lower_bound as i64) <= z.profile.c[k as usize],
            || format!("k={k}: bound {} above c", w.helly_lower_bound),
        )?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(120), || format!("took {t:?}"))?;
    Ok(format!(
        "{} values of k realized and recounted in {:.2}s",
        ks.len(),
        t.as_secs_f64()
    ))
}

fn audit() -> Outcome {
    let mut rows = 0;
    for dims in [&[2u32, 2][..], &[3, 3], &[4, 3], &[2, 2, 2]] {
        let site = FiniteSite::grid(dims).map_err(|e| e.to_string())?;
        let sets = enumerate_convex_subsets(&site).map_err(|e| e.to_string())?;
        let p = c_from_g(&g_profile_from(&site, &sets, site.len(), None));
        let r = bound_audit(&p, dims.len(), 2, true).map_err(|e| e.to_string())?;
        ensure(r.iter().all(|r| r.all_pass()), || format!("{dims:?} fails"))?;
        rows += r.len();
    }
    let (_, z) = z2_table(10);
    let r = bound_audit(&z.profile, 2, 2, true).map_err(|e| e.to_string())?;
    ensure(r.iter().all(|r| r.all_pass()), || "Z^2 table fails".into())?;
    for k in 0..=2 {
        ensure(r[k].aliev_equal == Some(true), || {
            format!("no equality at k={k}")
        })?;
    }
    rows += r.len();
    Ok(format!(
        "{rows} rows pass all four bounds; equality at n=2, k=0,1,2"
    ))
}

fn maximal_sets() -> Outcome {
    let start = Instant::now();
    let (_, z) = z2_table(5);
    for k in 1..=5 {
        let w = z.profile.witnesses[k].as_ref().ok_or("no witness")?;
        let p = convex_hull(w).map_err(|e| e.to_string())?;
        let m = expand_to_maximal(&p, k).map_err(|e| format!("k={k}: {e}"))?;
        let r = maximal_membership(&m.vertices().map_err(|e| e.to_string())?, k)
            .map_err(|e| e.to_string())?;
        ensure(r.member, || format!("k={k}: not maximal {r:?}"))?;
        ensure(ExtInt::Fin(r.facets as i64) == z.profile.c[k], || {
            format!("k={k}: {} facets, c = {}", r.facets, z.profile.c[k])
        })?;
    }
    let poly = |v: &[[i64; 2]]| {
        RationalPolygon::new(
            v.iter()
                .map(|p| [Q::from_integer(p[0].into()), Q::from_integer(p[1].into())])
                .collect(),
        )
        .map_err(|e| e.to_string())
    };
    let square = poly(&[[-1, -1], [1, -1], [1, 1], [-1, 1]])?;
    ensure(
        maximal_membership(&square, 1)
            .map_err(|e| e.to_string())?
            .member,
        || "square rejected".into(),
    )?;
    let hex = poly(&[[-1, -1], [0, -1], [1, 0], [1, 1], [0, 1], [-1, 0]])?;
    ensure(
        !maximal_membership(&hex, 1)
            .map_err(|e| e.to_string())?
            .member,
        || "hexagon accepted".into(),
    )?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(300), || format!("took {t:?}"))?;
    Ok(format!(
        "facet counts match c for k=1..5; square accepted, hexagon rejected ({:.2}s)",
        t.as_secs_f64()
    ))
}

fn certified_constants() -> Outcome {
    let start = Instant::now();
    let b = verify_andrews_estimates(2..=12, DEFAULT_PRECISION);
    let u = verify_upper_chain(2..=8, DEFAULT_PRECISION);
    let t = start.elapsed();
    for r in [&b, &u] {
        for c in &r.checks {
            ensure(c.verdict == Verdict::Pass, || {
                format!("n={} {}: {}", c.n, c.name, c.verdict)
            })?;
        }
    }
    ensure(
        b.precision == DEFAULT_PRECISION && u.precision == DEFAULT_PRECISION,
        || "needed more than the default precision".into(),
    )?;
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!(
        "{} checks certified at {DEFAULT_PRECISION} bits in {:.2}s",
        b.checks.len() + u.checks.len(),
        t.as_secs_f64()
    ))
}

fn random_unimodular(rng: &mut StdRng) -> [[i64; 2]; 2] {
    let mut m = [[1i64, 0], [0, 1]];
    for _ in 0..rng.gen_range(1..6) {
        let c = rng.gen_range(-3..=3);
        let e = match rng.gen_range(0..3) {
            0 => [[1, c], [0, 1]],
            1 => [[1, 0], [c, 1]],
            _ => [[0, 1], [1, 0]],
        };
        m = [
            [
                m[0][0] * e[0][0] + m[0][1] * e[1][0],
                m[0][0] * e[0][1] + m[0][1] * e[1][1],
            ],
            [
                m[1][0] * e[0][0] + m[1][1] * e[1][0],
                m[1][0] * e[0][1] + m[1][1] * e[1][1],
            ],
        ];
    }
    m
}

fn properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);

    // closure is idempotent and extensive
    let site = FiniteSite::grid(&[4, 3]).map_err(|e| e.to_string())?;
    for _ in 0..200 {
        let x: Vec<LatticePoint> = site
            .points()
            .iter()
            .filter(|_| rng.gen_bool(0.3))
            .cloned()
            .collect();
        let c = closure(&x, &site).map_err(|e| e.to_string())?;
        ensure(x.iter().all(|p| c.contains(p)), || {
            "closure not extensive".into()
        })?;
        ensure(closure(&c, &site).map_err(|e| e.to_string())? == c, || {
            "closure not idempotent".into()
        })?;
    }

    // canonical form under 1000 unimodular maps
    let (census, _) = z2_table(3);
    let polys: Vec<_> = census.iter().cloned().collect();
    for i in 0..1000 {
        let p = &polys[i % polys.len()];
        let m = random_unimodular(&mut rng);
        let (tx, ty) = (rng.gen_range(-50..=50), rng.gen_range(-50..=50));
        let img: Vec<LatticePoint> = p
            .vertices()
            .iter()
            .map(|v| {
                LatticePoint::from_slice(&[
                    m[0][0] * v[0] + m[0][1] * v[1] + tx,
                    m[1][0] * v[0] + m[1][1] * v[1] + ty,
                ])
            })
            .collect();
        let q = canonical_form_2d(&convex_hull(&img).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(&q == p, || format!("normal form changed under {m:?}"))?;
    }

    // census self-consistency
    for i in 0..=3 {
        for p in census.classes(i).unwrap() {
            let cyc = p.vertices();
            ensure(planar::interior_count(cyc) as usize == i, || {
                "interior count".into()
            })?;
            ensure(p.is_fixed_point() && !p.width_at_most_one(), || {
                "not a normal form".into()
            })?;
        }
    }

    // cache round trip
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache = CensusCache::new(dir.path());
    for i in 0..=3 {
        let f = CensusFile {
            interior: i,
            box_bound: helly_core::census::certified_box_bound(i),
            complete: true,
            polygons: census.classes(i).unwrap().to_vec(),
        };
        cache.save(&f).map_err(|e| e.to_string())?;
        let bytes = std::fs::read(cache.path_for(i)).map_err(|e| e.to_string())?;
        ensure(bytes == f.render().into_bytes(), || "bytes differ".into())?;
        ensure(
            parse_census_file(&f.render()).map_err(|e| e.to_string())? == f,
            || "round trip".into(),
        )?;
    }

    // output determinism under --threads 1 and 4
    for args in [
        &["grid", "--dims", "4x3", "--kmax", "12", "--format", "json"][..],
        &["census", "--k", "6", "--format", "json"],
        &["census", "--k", "6", "--format", "csv"],
    ] {
        let mut a1 = args.to_vec();
        a1.extend(["--threads", "1"]);
        let mut a4 = args.to_vec();
        a4.extend(["--threads", "4"]);
        let (c1, o1, _) = helly(&a1);
        let (c4, o4, _) = helly(&a4);
        ensure(c1 == 0 && c4 == 0 && o1 == o4, || {
            format!("{args:?} differs across thread counts")
        })?;
    }
    Ok("closure, 1000 unimodular maps, census, cache round trip, --threads {1,4}".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("3x3 grid profile", grid_profile),
        ("two-oracle equivalence", two_oracles),
        ("Z^2 table for k <= 10", z2_table_check),
        ("small-k witness polytopes", small_k),
        ("tightness at n = 2", small_k_tight),
        ("parabolic lower-bound construction", lower_bound),
        ("bound audit", audit),
        ("maximal lattice-free polygons", maximal_sets),
        ("certified constants", certified_constants),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(f).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("PASS {:>2} {name} [{secs:.2}s]: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.2}s]: {msg}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
