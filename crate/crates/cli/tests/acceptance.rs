//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them on success).
//!
//! Every tolerance here is exact (integer-weight instances), and every time
//! budget is asserted, not just measured.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use pmst_cli::{parse_instance, Instance};
use pmst_core::{
    branching_weight, build_q, edmonds_best_root, edmonds_fixed_root, enumerate_optimal,
    gen_potential, kruskal, perturb, prim, recover_phi, solve_fast, validate_branching,
    validate_phi, weight_by_formula, Error, GenSpec, PotentialSystem, RecoveryResult, RootSpec,
    DEFAULT_RECOVERY_TOL,
};

fn criterion<F>(name: &str, budget: Option<Duration>, body: F)
where
    F: FnOnce() -> Result<(), String>,
{
    let start = Instant::now();
    let mut outcome = body();
    let elapsed = start.elapsed();
    if outcome.is_ok() {
        if let Some(limit) = budget {
            if elapsed > limit {
                outcome = Err(format!("time budget exceeded: {elapsed:?} > {limit:?}"));
            }
        }
    }
    match &outcome {
        Ok(()) => println!("acceptance {name}: PASS ({elapsed:.2?})"),
        Err(msg) => println!("acceptance {name}: FAIL ({elapsed:.2?}) {msg}"),
    }
    if let Err(msg) = outcome {
        panic!("{name}: {msg}");
    }
}

const DENSITIES: [f64; 3] = [0.2, 0.5, 1.0];

// The 500 instances shared by criteria 1, 3, and 4.
fn scale_suite() -> impl Iterator<Item = (usize, PotentialSystem)> {
    (0..500usize).map(|i| {
        let spec = GenSpec {
            n: 2 + (i % 49),
            density: DENSITIES[i % 3],
            seed: 1000 + i as u64,
            weight_range: (0, 100),
        };
        (i, gen_potential(&spec).expect("valid spec"))
    })
}

#[test]
fn criterion_1_fast_path_equals_general_at_scale() {
    criterion(
        "1 fast-equals-general-500",
        Some(Duration::from_secs(30)),
        || {
            for (i, phi) in scale_suite() {
                let sol = solve_fast(&phi).map_err(|e| format!("instance {i}: {e}"))?;
                let q = build_q(&phi).map_err(|e| format!("instance {i}: {e}"))?;
                let (_, general) =
                    edmonds_best_root(&q).map_err(|e| format!("instance {i}: {e}"))?;
                let gw = branching_weight(&q, &general)
                    .map_err(|d| format!("instance {i}: invalid general branching: {d}"))?;
                if sol.weight != gw {
                    return Err(format!("instance {i}: fast {} != general {gw}", sol.weight));
                }
                if !validate_branching(&q, &sol.branching).ok() {
                    return Err(format!("instance {i}: fast branching fails validation"));
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_2_triple_agreement_small() {
    criterion(
        "2 triple-agreement-200",
        Some(Duration::from_secs(10)),
        || {
            let mut checked = 0;
            for i in 0..200usize {
                let n = 2 + (i % 5);
                let potential = i % 2 == 0;
                let (q, phi) = if potential {
                    let phi = gen_potential(&GenSpec {
                        n,
                        density: if i % 4 == 0 { 0.5 } else { 1.0 },
                        seed: 7000 + i as u64,
                        weight_range: (0, 40),
                    })
                    .unwrap();
                    (build_q(&phi).unwrap(), Some(phi))
                } else {
                    let g = pmst_core::gen_general(&GenSpec {
                        n,
                        density: 1.0,
                        seed: 7000 + i as u64,
                        weight_range: (-10, 40),
                    })
                    .unwrap();
                    (g, None)
                };

                for root in 0..n {
                    let oracle = enumerate_optimal(&q, RootSpec::Fixed(root));
                    let solver = edmonds_fixed_root(&q, root);
                    match (oracle, solver) {
                        (Ok((ow, _)), Ok(b)) => {
                            let bw = branching_weight(&q, &b)
                                .map_err(|d| format!("instance {i} root {root}: {d}"))?;
                            if ow != bw {
                                return Err(format!(
                                    "instance {i} root {root}: oracle {ow} != edmonds {bw}"
                                ));
                            }
                        }
                        (Err(Error::Infeasible { .. }), Err(Error::Infeasible { .. })) => {}
                        (a, b) => {
                            return Err(format!(
                                "instance {i} root {root}: feasibility disagreement {a:?} vs {b:?}"
                            ))
                        }
                    }
                }

                let (oracle_best, _) = enumerate_optimal(&q, RootSpec::All)
                    .map_err(|e| format!("instance {i}: {e}"))?;
                let (_, general) =
                    edmonds_best_root(&q).map_err(|e| format!("instance {i}: {e}"))?;
                if general.total_weight() != oracle_best {
                    return Err(format!(
                        "instance {i}: best-root {} != oracle {oracle_best}",
                        general.total_weight()
                    ));
                }
                if let Some(phi) = phi {
                    let fast = solve_fast(&phi).map_err(|e| format!("instance {i}: {e}"))?;
                    if fast.weight != oracle_best {
                        return Err(format!(
                            "instance {i}: fast {} != oracle {oracle_best}",
                            fast.weight
                        ));
                    }
                }
                checked += 1;
            }
            if checked != 200 {
                return Err(format!("only {checked}/200 instances checked"));
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_3_closed_form_weight() {
    criterion("3 closed-form-weight", None, || {
        for (i, phi) in scale_suite() {
            let fast = solve_fast(&phi).map_err(|e| format!("instance {i}: {e}"))?;
            let formula = weight_by_formula(&phi).map_err(|e| format!("instance {i}: {e}"))?;
            if fast.weight != formula {
                return Err(format!(
                    "instance {i}: fast {} != formula {formula}",
                    fast.weight
                ));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_4_recovery_round_trip() {
    criterion("4 recovery-round-trip", None, || {
        for (i, phi) in scale_suite() {
            let q = build_q(&phi).map_err(|e| format!("instance {i}: {e}"))?;
            match recover_phi(&q, DEFAULT_RECOVERY_TOL) {
                RecoveryResult::Potential {
                    phi: recovered,
                    components,
                } => {
                    let rebuilt = build_q(&recovered).map_err(|e| format!("instance {i}: {e}"))?;
                    if rebuilt != q {
                        return Err(format!("instance {i}: rebuilt weights differ"));
                    }
                    for comp in &components {
                        let min = comp
                            .iter()
                            .map(|&v| recovered.diagonal()[v])
                            .fold(f64::INFINITY, f64::min);
                        if min != 0.0 {
                            return Err(format!(
                                "instance {i}: component minimum diagonal is {min}, not 0"
                            ));
                        }
                    }
                }
                RecoveryResult::NotPotential { witness } => {
                    return Err(format!("instance {i}: wrongly rejected: {witness:?}"))
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_5_perturbation_detection() {
    criterion(
        "5 negative-detection-100",
        Some(Duration::from_secs(5)),
        || {
            for i in 0..100usize {
                let n = 3 + (i % 10);
                let phi = gen_potential(&GenSpec {
                    n,
                    density: 1.0,
                    seed: 5000 + i as u64,
                    weight_range: (0, 60),
                })
                .unwrap();
                let q = build_q(&phi).unwrap();
                let pick = q.arcs()[(i * 31) % q.arcs().len()];
                let bumped = perturb(&q, (pick.tail, pick.head), 1.0)
                    .map_err(|e| format!("instance {i}: {e}"))?;
                match recover_phi(&bumped, DEFAULT_RECOVERY_TOL) {
                    RecoveryResult::NotPotential { .. } => {}
                    RecoveryResult::Potential { .. } => {
                        return Err(format!(
                            "instance {i}: perturbed arc ({}, {}) went undetected",
                            pick.tail, pick.head
                        ))
                    }
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_6_mst_cross_check() {
    criterion("6 mst-cross-check-200", None, || {
        for i in 0..200usize {
            let n = 2 + (i % 199);
            let phi = gen_potential(&GenSpec {
                n,
                density: DENSITIES[i % 3],
                seed: 9000 + i as u64,
                weight_range: (0, 500),
            })
            .unwrap();
            let g = phi.support();
            let k = kruskal(g)
                .map_err(|e| format!("instance {i}: {e}"))?
                .total_weight();
            let starts = [0, i % n];
            for s in starts {
                let p = prim(g, s)
                    .map_err(|e| format!("instance {i}: {e}"))?
                    .total_weight();
                if k != p {
                    return Err(format!("instance {i} start {s}: kruskal {k} != prim {p}"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_7_positivity_equivalence() {
    criterion("7 positivity-equivalence", None, || {
        // 100 valid systems: every derived arc strictly positive.
        for i in 0..100usize {
            let phi = gen_potential(&GenSpec {
                n: 2 + (i % 20),
                density: 1.0,
                seed: 3000 + i as u64,
                weight_range: (0, 80),
            })
            .unwrap();
            let q = build_q(&phi).map_err(|e| format!("instance {i}: {e}"))?;
            if let Some(a) = q.arcs().iter().find(|a| a.weight <= 0.0) {
                return Err(format!(
                    "instance {i}: arc ({}, {}) has non-positive weight {}",
                    a.tail, a.head, a.weight
                ));
            }
        }

        // 100 systems with one injected diagonal-dominance break: exactly the
        // injected violation is reported and the corresponding arc weight
        // would drop to zero.
        let mut injected = 0;
        let mut seed = 4000u64;
        while injected < 100 {
            seed += 1;
            let phi = gen_potential(&GenSpec {
                n: 3 + (seed as usize % 15),
                density: 1.0,
                seed,
                weight_range: (0, 200),
            })
            .unwrap();
            let d = phi.diagonal();
            // Break the edge at the endpoint with the strictly larger
            // diagonal, so the opposite side stays valid.
            let Some(edge) = phi.support().edges().iter().find(|e| d[e.u] != d[e.v]) else {
                continue;
            };
            let (hot, cold) = if d[edge.u] > d[edge.v] {
                (edge.u, edge.v)
            } else {
                (edge.v, edge.u)
            };
            let broken = PotentialSystem::new(
                d.to_vec(),
                phi.support().edges().iter().map(|e| {
                    if (e.u, e.v) == (edge.u, edge.v) {
                        (e.u, e.v, d[hot])
                    } else {
                        (e.u, e.v, e.weight)
                    }
                }),
            )
            .unwrap();

            let check = validate_phi(&broken);
            if check.ok() {
                return Err(format!("seed {seed}: injected violation went unreported"));
            }
            if check.violations().len() != 1 {
                return Err(format!(
                    "seed {seed}: expected exactly 1 violation, got {}",
                    check.violations().len()
                ));
            }
            let witness = &check.violations()[0].witness;
            if !witness.starts_with(&format!("({hot}, {cold})")) {
                return Err(format!("seed {seed}: wrong witness '{witness}'"));
            }
            // The broken side's derived arc weight is exactly zero.
            let q_weight = broken.off_diagonal(hot, cold).unwrap() - d[hot];
            if q_weight > 0.0 {
                return Err(format!(
                    "seed {seed}: derived arc weight {q_weight} is positive"
                ));
            }
            injected += 1;
        }
        Ok(())
    });
}

const WORKED2_PHI: &str = "phi 2\n0 5\n5 1\n";
const WORKED3_PHI: &str = "phi 3\n1 4 6\n4 2 5\n6 5 3\n";
const WORKED3_Q: &str = "q 3\n* 3 5\n2 * 3\n3 2 *\n";
const INCONSISTENT_TRIANGLE_Q: &str = "q 3\n* 1 1\n2 * 1\n1 2 *\n";

fn pmst(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_pmst"))
        .args(args)
        .output()
        .expect("binary should run");
    (
        String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        out.status.code().expect("process exits"),
    )
}

#[test]
fn criterion_8_cli_conformance() {
    criterion("8 cli-golden-files", None, || {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let file = |name: &str, contents: &str| -> PathBuf {
            let p = dir.path().join(name);
            std::fs::write(&p, contents).unwrap();
            p
        };
        let w2 = file("w2.phi", WORKED2_PHI);
        let w3 = file("w3.phi", WORKED3_PHI);
        let q3 = file("w3.q", WORKED3_Q);
        let tri = file("tri.q", INCONSISTENT_TRIANGLE_Q);
        let arg = |p: &PathBuf| p.to_str().unwrap().to_string();

        let cases: Vec<(Vec<String>, &str, i32)> = vec![
            (
                vec!["solve".into(), arg(&w3)],
                "method fast\nroot 0\narc 1 0 2\narc 2 1 2\nweight 4\n",
                0,
            ),
            (
                vec!["solve".into(), arg(&w2)],
                "method fast\nroot 0\narc 1 0 4\nweight 4\n",
                0,
            ),
            (
                vec!["solve".into(), arg(&w3), "--force-general".into()],
                "method general\nroot 0\narc 1 0 2\narc 2 1 2\nweight 4\n",
                0,
            ),
            (
                vec!["mst".into(), arg(&w3)],
                "edge 0 1 4\nedge 1 2 5\nweight 9\n",
                0,
            ),
            (
                vec![
                    "mst".into(),
                    arg(&w2),
                    "--algo".into(),
                    "prim".into(),
                    "--start".into(),
                    "1".into(),
                ],
                "edge 0 1 5\nweight 5\n",
                0,
            ),
            (
                vec!["msa".into(), arg(&w3)],
                "root 0\narc 1 0 2\narc 2 1 2\nweight 4\n",
                0,
            ),
            (
                vec!["msa".into(), arg(&w3), "--root".into(), "2".into()],
                "root 2\narc 0 1 3\narc 1 2 3\nweight 6\n",
                0,
            ),
            (
                vec!["check-potential".into(), arg(&q3)],
                "potential yes\nphi 3\n0 3 5\n3 1 4\n5 4 2\n",
                0,
            ),
            (
                vec!["check-potential".into(), arg(&tri)],
                "potential no\nwitness inconsistent-cycle 1 0 2 mismatch -2\n",
                1,
            ),
            (
                vec!["compare".into(), arg(&w3)],
                "fast 4\ngeneral 4\nequal yes\n",
                0,
            ),
            (
                vec!["compare".into(), arg(&q3)],
                "fast 4\ngeneral 4\nequal yes\n",
                0,
            ),
        ];
        for (args, expected_stdout, expected_code) in cases {
            let argv: Vec<&str> = args.iter().map(String::as_str).collect();
            let (stdout, code) = pmst(&argv);
            if stdout != expected_stdout {
                return Err(format!(
                    "pmst {argv:?}: stdout mismatch\n--- got ---\n{stdout}--- want ---\n{expected_stdout}"
                ));
            }
            if code != expected_code {
                return Err(format!("pmst {argv:?}: exit {code}, want {expected_code}"));
            }
        }

        // Generated instances are byte-stable across invocations.
        let gen_args = ["gen", "--type", "potential", "--n", "6", "--seed", "42"];
        let (first, code) = pmst(&gen_args);
        if code != 0 {
            return Err(format!("gen exited {code}"));
        }
        let (second, _) = pmst(&gen_args);
        if first != second {
            return Err("gen output differs between identical invocations".into());
        }
        match parse_instance(&first) {
            Ok(Instance::Potential(phi)) => {
                if !validate_phi(&phi).ok() {
                    return Err("generated phi fails validation".into());
                }
            }
            other => return Err(format!("gen emitted something unexpected: {other:?}")),
        }
        Ok(())
    });
}

#[test]
fn criterion_9_performance_sanity() {
    criterion("9 performance-sanity", None, || {
        let phi = gen_potential(&GenSpec {
            n: 300,
            density: 1.0,
            seed: 77,
            weight_range: (0, 100),
        })
        .unwrap();
        let q = build_q(&phi).unwrap();

        let start = Instant::now();
        let (_, general) = edmonds_best_root(&q).map_err(|e| e.to_string())?;
        let general_time = start.elapsed();
        if general_time > Duration::from_secs(10) {
            return Err(format!("edmonds_best_root took {general_time:?} (> 10 s)"));
        }

        let start = Instant::now();
        let fast = solve_fast(&phi).map_err(|e| e.to_string())?;
        let fast_time = start.elapsed();
        if fast_time > Duration::from_millis(100) {
            return Err(format!("solve_fast took {fast_time:?} (> 0.1 s)"));
        }

        if fast.weight != general.total_weight() {
            return Err(format!(
                "weights disagree at n = 300: fast {} vs general {}",
                fast.weight,
                general.total_weight()
            ));
        }

        // The benchmark table must rank fast strictly below general for
        // n >= 100.
        let (csv, code) = pmst(&[
            "bench",
            "--type",
            "potential",
            "--n",
            "100,150",
            "--seed",
            "7",
            "--reps",
            "3",
        ]);
        if code != 0 {
            return Err(format!("bench exited {code}"));
        }
        let mut medians: std::collections::HashMap<(String, String), f64> =
            std::collections::HashMap::new();
        for line in csv.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            medians.insert(
                (cols[0].to_string(), cols[1].to_string()),
                cols[2].parse::<f64>().map_err(|e| e.to_string())?,
            );
        }
        for n in ["100", "150"] {
            let fast_ms = medians[&(n.to_string(), "fast".to_string())];
            let general_ms = medians[&(n.to_string(), "general".to_string())];
            if fast_ms >= general_ms {
                return Err(format!(
                    "n = {n}: fast median {fast_ms} ms not below general {general_ms} ms"
                ));
            }
        }
        Ok(())
    });
}
