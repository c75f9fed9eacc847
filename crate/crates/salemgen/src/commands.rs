//! The six subcommands over a loaded configuration.

use std::io::Write;
use std::path::Path;

use salem_core::gensalem::{
    classify_continuity, classify_continuity_at, classify_monotonicity,
    discontinuity_class, equation_residual, eval_functional, eval_series, increment,
    increment_extremes, integral, ContinuityVerdict, DiscontinuityClass, Monotonicity,
};
use salem_core::numrep::{
    classify_rationality, cylinder_bounds, decode, encode, Cylinder, DigitString,
    Rationality,
};
use salem_core::rvdist::{ks_compare, model_cdf};
use salem_core::shiftops::plan_deletions;
use salem_core::{Error, EvalResult};

use crate::config::Loaded;
use crate::digits::{parse_point, PointArg};
use crate::fmtnum::sig12;
use crate::{par, Failure};

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn u01(key: u64) -> f64 {
    (mix(key) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Series,
    Feq,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Check {
    None,
    Quadrature,
}

fn point_to_digits(loaded: &Loaded, point: &str) -> Result<DigitString, Failure> {
    match parse_point(point, loaded.spec.q())? {
        PointArg::Digits(d) => Ok(d),
        PointArg::Real(x) => encode(x, &loaded.spec.schedule(), 64)
            .map_err(|e| Failure::point(e.to_string())),
    }
}

pub fn eval(
    loaded: &Loaded,
    point: &str,
    method: Method,
    tol: Option<f64>,
    depth: u32,
) -> Result<(), Failure> {
    let tol = tol.unwrap_or(loaded.tol);
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Failure::point(format!("tol must be positive, got {tol}")));
    }
    if depth == 0 {
        return Err(Failure::point("depth must be at least 1".to_string()));
    }
    let d = point_to_digits(loaded, point)?;
    let result: EvalResult = match method {
        Method::Series => eval_series(&d, &loaded.spec, tol),
        Method::Feq => eval_functional(&d, &loaded.spec, depth),
    };
    println!("value {}", sig12(result.value));
    println!("bound {}", sig12(result.bound));
    Ok(())
}

pub fn plot(loaded: &Loaded, samples: usize, out: &Path) -> Result<(), Failure> {
    if samples < 2 {
        return Err(Failure::point(format!(
            "samples must be at least 2, got {samples}"
        )));
    }
    let q = loaded.spec.q() as f64;
    let mut rank = 1u32;
    let mut cells = q;
    while cells < samples as f64 {
        cells *= q;
        rank += 1;
    }
    let sched = loaded.spec.schedule();
    let mut body = String::from("s,G,bound\n");
    for i in 0..samples {
        let x = i as f64 / samples as f64;
        let d = encode(x, &sched, rank).map_err(|e| Failure::point(e.to_string()))?;
        let s = decode(&d, &sched, 1e-15).value;
        let g = eval_series(&d, &loaded.spec, loaded.tol);
        body.push_str(&format!(
            "{},{},{}\n",
            sig12(s),
            sig12(g.value),
            sig12(g.bound)
        ));
    }
    let mut file = std::fs::File::create(out)
        .map_err(|e| Failure::io(format!("{}: {e}", out.display())))?;
    file.write_all(body.as_bytes())
        .map_err(|e| Failure::io(format!("{}: {e}", out.display())))?;
    println!("wrote {samples} rows to {}", out.display());
    Ok(())
}

pub fn integral_cmd(
    loaded: &Loaded,
    check: Check,
    tol: f64,
    cell_len: f64,
) -> Result<(), Failure> {
    let closed = integral(&loaded.spec);
    println!("closed {}", sig12(closed));
    if check == Check::Quadrature {
        if !(cell_len > 0.0 && cell_len < 1.0) {
            return Err(Failure::point(format!(
                "cell-len must lie in (0, 1), got {cell_len}"
            )));
        }
        let numeric = par::quadrature(&loaded.spec, cell_len, 1e-9);
        let delta = (closed - numeric).abs();
        println!("quadrature {}", sig12(numeric));
        println!("delta {}", sig12(delta));
        if delta > tol {
            return Err(Failure::integral(format!(
                "quadrature differs from the closed form by {delta:e} > {tol:e}"
            )));
        }
    }
    Ok(())
}

fn monotonicity_label(loaded: &Loaded) -> &'static str {
    match classify_monotonicity(&loaded.spec) {
        Ok(Monotonicity::StrictlyIncreasing) => "strictly-increasing",
        Ok(Monotonicity::NonDecreasing) => "non-decreasing",
        Ok(Monotonicity::ConstantAe) => "constant-ae",
        Ok(Monotonicity::NoMonotonicityIntervals) => "no-monotonicity-intervals",
        Ok(Monotonicity::HasSomeMonotonicityInterval) => "has-some-monotonicity-interval",
        Err(Error::UnclassifiedMonotonicity) => "unclassified",
        Err(_) => "unclassified",
    }
}

pub fn classify(loaded: &Loaded, point: Option<&str>) -> Result<(), Failure> {
    if let Some(point) = point {
        let verdict = match parse_point(point, loaded.spec.q())? {
            PointArg::Digits(d) => classify_continuity(&d, &loaded.spec),
            PointArg::Real(x) => classify_continuity_at(x, &loaded.spec)
                .map_err(|e| Failure::point(e.to_string()))?,
        };
        match verdict {
            ContinuityVerdict::Continuous => println!("continuity: continuous"),
            ContinuityVerdict::Jump { left, right } => println!(
                "continuity: jump left={} right={}",
                sig12(left),
                sig12(right)
            ),
        }
    }
    let set = match discontinuity_class(&loaded.spec) {
        DiscontinuityClass::Empty => "empty",
        DiscontinuityClass::Finite => "finite",
        DiscontinuityClass::Countable => "countable",
    };
    println!("discontinuity-set: {set}");
    println!("monotonicity: {}", monotonicity_label(loaded));
    Ok(())
}

pub fn sample(
    loaded: &Loaded,
    n: usize,
    seed: Option<u64>,
    ks: bool,
    grid: usize,
    threshold: f64,
) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::point("n must be at least 1".to_string()));
    }
    if grid == 0 {
        return Err(Failure::point("grid must be at least 1".to_string()));
    }
    let seed = seed.unwrap_or(loaded.seed);
    let samples = par::samples(&loaded.spec, n, seed).map_err(|e| match e {
        Error::NotDistributional => Failure::distributional(e.to_string()),
        other => Failure::point(other.to_string()),
    })?;
    let mean: f64 = samples.iter().sum::<f64>() / n as f64;
    println!("n {n}");
    println!("seed {seed}");
    println!("mean {}", sig12(mean));
    if ks {
        let report = ks_compare(&samples, &loaded.spec, grid, threshold, seed);
        println!("ks {}", sig12(report.ks_statistic));
        println!("pass {}", report.pass);
    }
    Ok(())
}

struct Battery {
    failures: usize,
}

impl Battery {
    fn check(&mut self, name: &str, outcome: Result<String, String>) {
        match outcome {
            Ok(detail) => println!("PASS {name} ({detail})"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL {name} ({detail})");
            }
        }
    }

    fn skip(&mut self, name: &str, why: &str) {
        println!("SKIP {name} ({why})");
    }
}

fn all_bases(q: u32, rank: usize) -> Vec<Vec<u32>> {
    let mut bases: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..rank {
        bases = bases
            .into_iter()
            .flat_map(|b| {
                (0..q).map(move |c| {
                    let mut nb = b.clone();
                    nb.push(c);
                    nb
                })
            })
            .collect();
    }
    bases
}

/// The invariant battery for a configured function; exit is nonzero when
/// any check fails.
pub fn verify(loaded: &Loaded) -> Result<(), Failure> {
    let spec = &loaded.spec;
    let sched = &loaded.sched;
    let q = spec.q();
    let mut battery = Battery { failures: 0 };

    // Representation round trip under the configured schedule.
    let mut worst = 0.0f64;
    for trial in 0..200u64 {
        let x = u01(trial.wrapping_mul(0x9e37));
        let d = encode(x, sched, 64).expect("x in [0,1]");
        let back = decode(&d, sched, 1e-15).value;
        let cap: f64 = (1..=64u32).map(|k| sched.vector_at(k).max_weight()).product();
        let err = (back - x).abs();
        worst = worst.max(err - cap);
    }
    battery.check(
        "round-trip",
        if worst <= 1e-12 {
            Ok(format!("200 points, max excess error {worst:.1e}"))
        } else {
            Err(format!("excess error {worst:.3e}"))
        },
    );

    // Twin decode equality.
    let mut worst = 0.0f64;
    for trial in 0..50u64 {
        let len = 1 + (mix(trial) % 8) as usize;
        let mut digits: Vec<u32> =
            (0..len).map(|i| (mix(trial * 64 + i as u64) % q as u64) as u32).collect();
        digits.push(1);
        let d = DigitString::zeros(q, digits).expect("valid digits");
        if let Rationality::Rational {
            zeros_form: Some(z),
            max_form: Some(m),
        } = classify_rationality(&d)
        {
            let a = decode(&z, sched, 1e-15).value;
            let b = decode(&m, sched, 1e-15).value;
            worst = worst.max((a - b).abs());
        }
    }
    battery.check(
        "twin-equality",
        if worst <= 1e-12 {
            Ok(format!("50 rational points, max gap {worst:.1e}"))
        } else {
            Err(format!("max twin gap {worst:.3e}"))
        },
    );

    // Cylinders of a fixed rank tile the interval.
    let rank = if q == 2 { 6 } else { 4 };
    let mut total = 0.0;
    let mut prev_hi = 0.0;
    let mut adjacent = true;
    for base in all_bases(q, rank) {
        let cyl = Cylinder::new(q, base).expect("valid base");
        let (lo, hi) = cylinder_bounds(&cyl, sched);
        adjacent &= (lo - prev_hi).abs() <= 1e-9;
        prev_hi = hi;
        total += cyl.length(sched);
    }
    battery.check(
        "cylinder-partition",
        if adjacent && (total - 1.0).abs() <= 1e-9 && (prev_hi - 1.0).abs() <= 1e-9 {
            Ok(format!("rank {rank}, total length {total:.12}"))
        } else {
            Err(format!("total {total}, last endpoint {prev_hi}"))
        },
    );

    // The two evaluators agree within their bounds.
    let mut ok = true;
    let mut worst = 0.0f64;
    for trial in 0..300u64 {
        let digits: Vec<u32> =
            (0..48).map(|i| (mix(trial * 97 + i) % q as u64) as u32).collect();
        let d = DigitString::zeros(q, digits).expect("valid digits");
        let depth = 4 + (mix(trial) % 28) as u32;
        let a = eval_series(&d, spec, 1e-12);
        let b = eval_functional(&d, spec, depth);
        let gap = (a.value - b.value).abs();
        worst = worst.max(gap);
        ok &= gap <= a.bound + b.bound;
    }
    battery.check(
        "evaluator-agreement",
        if ok {
            Ok(format!("300 points, max gap {worst:.1e}"))
        } else {
            Err(format!("gap {worst:.3e} exceeded the combined bounds"))
        },
    );

    // Functional-equation residuals.
    let mut worst = 0.0f64;
    for trial in 0..100u64 {
        let digits: Vec<u32> =
            (0..48).map(|i| (mix(trial * 193 + i) % q as u64) as u32).collect();
        let d = DigitString::zeros(q, digits).expect("valid digits");
        for k in 1..=8 {
            worst = worst.max(equation_residual(&d, spec, k));
        }
    }
    battery.check(
        "functional-residuals",
        if worst <= 1e-9 {
            Ok(format!("100 points, k <= 8, max residual {worst:.1e}"))
        } else {
            Err(format!("max residual {worst:.3e}"))
        },
    );

    // Closed-form integral against quadrature.
    let closed = integral(spec);
    let numeric = par::quadrature(spec, 1e-5, 1e-9);
    let delta = (closed - numeric).abs();
    battery.check(
        "integral-quadrature",
        if delta <= 5e-4 {
            Ok(format!("closed {closed:.9}, quadrature {numeric:.9}"))
        } else {
            Err(format!("delta {delta:.3e}"))
        },
    );

    // Increment product against the two extremal evaluations; the identity
    // needs coefficients summing to 1.
    let coeff_sum: f64 = spec.coeffs().coeffs().iter().sum();
    if (coeff_sum - 1.0).abs() <= 1e-9 {
        let mut worst = 0.0f64;
        for trial in 0..50u64 {
            let len = 1 + (mix(trial) % 5) as usize;
            let base: Vec<u32> =
                (0..len).map(|i| (mix(trial * 31 + i as u64) % q as u64) as u32).collect();
            let (lo, hi) = increment_extremes(spec, &base);
            let g_lo = eval_series(&lo, spec, 1e-13).value;
            let g_hi = eval_series(&hi, spec, 1e-13).value;
            worst = worst.max((g_hi - g_lo - increment(spec, &base)).abs());
        }
        battery.check(
            "increment-oracle",
            if worst <= 1e-9 {
                Ok(format!("50 bases, max gap {worst:.1e}"))
            } else {
                Err(format!("max gap {worst:.3e}"))
            },
        );
    } else {
        battery.skip("increment-oracle", "coefficients do not sum to 1");
    }

    // Deletion plans equal direct erasure.
    let mut plan_ok = true;
    let mut tuples: Vec<Vec<u32>> = Vec::new();
    let mut stack: Vec<Vec<u32>> = vec![Vec::new()];
    while let Some(t) = stack.pop() {
        if !t.is_empty() {
            tuples.push(t.clone());
        }
        if t.len() < 3 {
            for n in 1..=5u32 {
                if !t.contains(&n) {
                    let mut nt = t.clone();
                    nt.push(n);
                    stack.push(nt);
                }
            }
        }
    }
    for trial in 0..64u64 {
        let digits: Vec<u32> =
            (0..6).map(|i| (mix(trial * 7 + i) % q as u64) as u32).collect();
        let d = DigitString::zeros(q, digits).expect("valid digits");
        for targets in &tuples {
            let plan = plan_deletions(targets).expect("distinct targets");
            let got = plan.apply(&d);
            let mut expect = Vec::new();
            let mut k = 1u32;
            while expect.len() < 12 {
                if !targets.contains(&k) {
                    expect.push(d.digit_at(k));
                }
                k += 1;
            }
            plan_ok &= got.digits_to(12) == expect;
        }
    }
    battery.check(
        "deletion-plans",
        if plan_ok {
            Ok(format!("{} tuples over 64 strings", tuples.len()))
        } else {
            Err("mismatch against direct erasure".to_string())
        },
    );

    // Shape checks specific to the configured class.
    if spec.coeffs().is_distributional() {
        let mut in_range = true;
        for trial in 0..200u64 {
            let digits: Vec<u32> =
                (0..48).map(|i| (mix(trial * 11 + i) % q as u64) as u32).collect();
            let d = DigitString::zeros(q, digits).expect("valid digits");
            let g = eval_series(&d, spec, 1e-12).value;
            in_range &= (-1e-12..=1.0 + 1e-12).contains(&g);
        }
        battery.check(
            "distributional-range",
            if in_range {
                Ok("200 values inside [0, 1]".to_string())
            } else {
                Err("value escaped [0, 1]".to_string())
            },
        );
    } else {
        battery.skip("distributional-range", "coefficients are not a distribution");
    }

    if classify_monotonicity(spec) == Ok(Monotonicity::StrictlyIncreasing) {
        let mut points: Vec<f64> = (0..200u64).map(|i| u01(i.wrapping_mul(0x51ed))).collect();
        points.sort_unstable_by(f64::total_cmp);
        let mut monotone = true;
        let mut prev = -1.0;
        let g_sched = spec.schedule();
        for &x in &points {
            let g = eval_series(&encode(x, &g_sched, 64).expect("x in [0,1]"), spec, 1e-12).value;
            monotone &= g >= prev - 1e-12;
            prev = g;
        }
        battery.check(
            "monotone-sampling",
            if monotone {
                Ok("200 sorted points".to_string())
            } else {
                Err("order violation".to_string())
            },
        );
    } else {
        battery.skip("monotone-sampling", "class is not strictly increasing");
    }

    // The sampled digits are independent draws at every position, so the
    // empirical CDF is compared quantitatively only against the identity
    // indexing; for other sequences the model CDF is checked for shape.
    if spec.coeffs().is_distributional() {
        if spec.perm().deviation_class() == salem_core::DeviationClass::IdentityEverywhere {
            let samples = par::samples(spec, 20_000, loaded.seed).expect("distributional");
            let report = ks_compare(&samples, spec, 256, 0.015, loaded.seed);
            battery.check(
                "ks-self-test",
                if report.pass {
                    Ok(format!("ks {:.5} over 20000 samples", report.ks_statistic))
                } else {
                    Err(format!("ks {:.5}", report.ks_statistic))
                },
            );
        } else {
            battery.skip("ks-self-test", "index sequence is not the identity");
            let mut shaped = model_cdf(spec, -0.5) == 0.0 && model_cdf(spec, 1.5) == 1.0;
            for g in 0..=128 {
                let v = model_cdf(spec, g as f64 / 128.0);
                shaped &= (-1e-12..=1.0 + 1e-12).contains(&v);
            }
            battery.check(
                "cdf-well-formed",
                if shaped {
                    Ok("model CDF bounded on the grid with pinned tails".to_string())
                } else {
                    Err("model CDF escaped [0, 1]".to_string())
                },
            );
        }
    } else {
        battery.skip("ks-self-test", "coefficients are not a distribution");
    }

    if battery.failures == 0 {
        println!("verify: all checks passed");
        Ok(())
    } else {
        Err(Failure::verify(format!(
            "{} check(s) failed",
            battery.failures
        )))
    }
}
