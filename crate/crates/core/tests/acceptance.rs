//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.
//!
//! All comparisons are exact; there are no tolerances.

use std::process::{Command, ExitCode};
use std::time::Instant;

use braidchain::suite::{
    run_suite, CheckResult, Status, SuiteConfig, SuiteName, VerificationReport,
};

struct Criterion {
    name: &'static str,
    /// Check-id prefixes that make up the criterion.
    prefixes: &'static [&'static str],
    /// Ids that must be present for the criterion to count as covered.
    required: &'static [&'static str],
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        name: "braid equation for R and R^-1 (SL 2-4, SO 3-5, Sp N=2,4)",
        prefixes: &["braid."],
        required: &["braid.sl.n4", "braid.so.n5", "braid.sp.n2", "braid.sp.n4"],
    },
    Criterion {
        name: "projector axioms and rank table",
        prefixes: &["projectors."],
        required: &["projectors.sl.n4", "projectors.so.n5", "projectors.sp.n4"],
    },
    Criterion {
        name: "admissibility table (SO Clifford and Sp Weyl rejected for N >= 4)",
        prefixes: &["lemma1."],
        required: &["lemma1.so.clifford.n3", "lemma1.sp.weyl.n4", "lemma1.sp.weyl.n6", "lemma1.sl.clifford.n4"],
    },
    Criterion {
        name: "uniqueness of the chain braiding (x R passes; R^-1, 1, perturbed fail)",
        prefixes: &["prop1."],
        required: &["prop1.sl.n2", "prop1.sl.n3"],
    },
    Criterion {
        name: "Poincare series match in degrees 0..4 (single copies, chains, GL(M) x SL(N))",
        prefixes: &["series.sl", "series.so", "series.sp", "chain.sl", "chain.so", "chain.sp", "glm.series."],
        required: &[
            "series.sl.n3.clifford.m1.v-1",
            "series.so.n3.weyl.m1.v+1",
            "series.sp.n2.clifford.m1.v+1",
            "chain.sl.n2.m3.weyl",
            "chain.sl.n2.mixed-parity.m3",
            "glm.series.weyl.r.m3.n3",
            "glm.series.clifford.rinv.m3.n3",
        ],
    },
    Criterion {
        name: "confluence, with residues for forbidden braidings and inadmissible signs",
        prefixes: &["series.", "chain.", "glm.series."],
        required: &[
            "chain.negative.sl.n2.cyclic.m3",
            "chain.negative.sl.n2.inverse-creator-braiding.m2",
            "series.negative.so.n3.clifford.c1",
            "series.negative.sp.n4.weyl.c1",
        ],
    },
    Criterion {
        name: "GL(M) x SL(N) projector identities and explicit-form equivalence (M, N in {2,3})",
        prefixes: &["glm.deco.", "glm.expand.", "glm.last-copy."],
        required: &["glm.deco.m3.n3", "glm.expand.weyl.m3.n3", "glm.expand.clifford.m2.n3", "glm.last-copy.weyl.m3.n3"],
    },
    Criterion {
        name: "SO/Sp tensor spectra exclude both signs",
        prefixes: &["glm.nogo."],
        required: &["glm.nogo.so.n3.m2.v+1", "glm.nogo.so.n5.m2.v-1", "glm.nogo.sp.n2.m2.v+1", "glm.nogo.sp.n4.m2.v-1"],
    },
    Criterion {
        name: "star structures (inverse ordering, GL(M) star, SO metric star; identity ordering fails)",
        prefixes: &["star."],
        required: &[
            "star.chain.sl.n2.m3.weyl.inverse-order",
            "star.negative.sl.n2.m2.identity-order",
            "star.glm.weyl.m2.n2",
            "star.metric.so.n3.m2.inverse-order",
        ],
    },
    Criterion {
        name: "classical limit at q = 1",
        prefixes: &["classical.", "glm.classical."],
        required: &["classical.sl.n3.clifford.m1", "classical.so.n3.weyl.m1", "glm.classical.clifford.m3.n3"],
    },
];

fn select<'a>(report: &'a VerificationReport, c: &Criterion) -> Vec<&'a CheckResult> {
    report
        .checks
        .iter()
        .filter(|r| c.prefixes.iter().any(|p| r.id.starts_with(p)))
        .collect()
}

fn line(ok: bool, name: &str, detail: &str) -> bool {
    println!("{} {name} [{detail}]", if ok { "PASS" } else { "FAIL" });
    ok
}

fn deterministic_cli() -> (bool, String) {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_braidchain"))
            .args(["verify", "--suite", "all", "--format", "json"])
            .env_remove("BRAIDCHAIN_MAX_DEGREE")
            .output()
    };
    match (run(), run()) {
        (Ok(a), Ok(b)) => {
            let same = a.stdout == b.stdout && !a.stdout.is_empty();
            let ok = same && a.status.code() == Some(0) && b.status.code() == Some(0);
            (
                ok,
                format!(
                    "{} bytes, identical={same}, exit={:?}",
                    a.stdout.len(),
                    a.status.code()
                ),
            )
        }
        (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let report = match run_suite(&SuiteConfig::new(SuiteName::All)) {
        Ok(r) => r,
        Err(e) => {
            println!("FAIL suite run [{e}]");
            return ExitCode::FAILURE;
        }
    };
    let elapsed = start.elapsed();
    let mut all = true;
    for c in CRITERIA {
        let checks = select(&report, c);
        let failed: Vec<&str> = checks
            .iter()
            .filter(|r| r.status != Status::Pass)
            .map(|r| r.id.as_str())
            .collect();
        let missing: Vec<&str> = c
            .required
            .iter()
            .copied()
            .filter(|id| !checks.iter().any(|r| r.id == *id))
            .collect();
        let mut detail = format!("{} checks", checks.len());
        if !failed.is_empty() {
            detail.push_str(&format!("; failed: {}", failed.join(", ")));
        }
        if !missing.is_empty() {
            detail.push_str(&format!("; missing: {}", missing.join(", ")));
        }
        all &= line(
            !checks.is_empty() && failed.is_empty() && missing.is_empty(),
            c.name,
            &detail,
        );
    }
    let (ok, detail) = deterministic_cli();
    all &= line(
        ok,
        "byte-identical reports from two `verify --suite all` runs",
        &detail,
    );
    println!(
        "{} checks in {:.1}s; {}",
        report.checks.len(),
        elapsed.as_secs_f64(),
        if all {
            "all criteria pass"
        } else {
            "some criteria FAILED"
        }
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
