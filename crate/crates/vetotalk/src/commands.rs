//! The five subcommands. Each returns the result file plus a human summary
//! and the process exit code.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use vetotalk_core::construct::{solve_with, Equilibrium, Method, Play};
use vetotalk_core::participation::{acceptance_set, participation_structure};
use vetotalk_core::threshold::{best_partitional_value, exit_threshold, mechanism_bound};
use vetotalk_core::verify::{check_limit_equilibrium, check_mediated, CheckMode, CheckReport, MediatedReport};
use vetotalk_core::{GameSpec, MediatedMechanism, PosteriorTable, Rational, ReceiverStrategy, SenderStrategy, TypeSet};

use crate::error::{CliError, EXIT_UNRESOLVED};
use crate::files::*;
use crate::render::{self, point};

pub struct Completed {
    pub result: ResultFile,
    pub summary: String,
    pub code: i32,
}

fn one_based(set: TypeSet) -> Vec<usize> {
    set.iter().map(|k| k + 1).collect()
}

fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().map(Q::from).collect()
}

fn args(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

pub fn method_name(method: Method) -> String {
    match method {
        Method::Auto => "auto".into(),
        Method::Nonrevealing => "nonrevealing".into(),
        Method::Partition => "partition".into(),
        Method::LeaderFollower => "thm8".into(),
        Method::Mixed3 => "mixed3".into(),
        Method::Mediated3 => "mediated3".into(),
        Method::Grid { resolution } => format!("grid:{resolution}"),
    }
}

// ---- structure -------------------------------------------------------------

pub fn structure(game_path: &Path) -> Result<Completed, CliError> {
    let (file, game) = load_game(game_path)?;
    let ps = participation_structure(&game)?;
    let (class, pivot) = render::classification(ps.classification);

    let mut summary = String::new();
    let cells: Vec<String> = ps.maximal.iter().map(|s| s.to_string()).collect();
    let _ = writeln!(summary, "participation structure: {}", cells.join(" "));
    match pivot {
        Some(p) => {
            let _ = writeln!(summary, "classification: {class} (pivot type {})", p + 1);
        }
        None => {
            let _ = writeln!(summary, "classification: {class}");
        }
    }
    let mut sets = Vec::new();
    for &set in &ps.maximal {
        let poly = acceptance_set(&game, set)?;
        let _ = writeln!(summary, "X({set}):");
        for r in poly.rows() {
            let _ = writeln!(summary, "  {}", render::row(r));
        }
        sets.push(AcceptanceSetOut {
            set: one_based(set),
            rows: poly.rows().iter().map(RowFile::from_core).collect(),
        });
    }

    let mut result = ResultFile::new(
        "structure",
        args(&[("game", path_str(game_path))]),
        file.digest(),
        "structure",
    );
    result.structure = Some(StructureOut {
        maximal: ps.maximal.iter().map(|s| one_based(*s)).collect(),
        classification: class.into(),
        pivot: pivot.map(|p| p + 1),
        acceptance_sets: sets,
    });
    Ok(Completed {
        result,
        summary,
        code: 0,
    })
}

// ---- solve -----------------------------------------------------------------

pub fn solve(game_path: &Path, method: Method) -> Result<Completed, CliError> {
    let (file, game) = load_game(game_path)?;
    let out = solve_with(&game, method)?;
    let attempts: Vec<AttemptOut> = out
        .attempts
        .iter()
        .map(|a| AttemptOut {
            method: a.provenance.name().into(),
            failure: a.failure.clone(),
        })
        .collect();
    let arguments = args(&[("game", path_str(game_path)), ("method", method_name(method))]);

    let mut summary = String::new();
    let (mut result, code) = match &out.equilibrium {
        Some(eq) => {
            let mut r = ResultFile::new("solve", arguments, file.digest(), "equilibrium");
            fill_equilibrium(&mut r, &game, eq, &mut summary);
            (r, 0)
        }
        None => {
            let _ = writeln!(summary, "unresolved: no construction produced an equilibrium");
            (
                ResultFile::new("solve", arguments, file.digest(), "unresolved"),
                EXIT_UNRESOLVED,
            )
        }
    };
    let _ = writeln!(summary, "attempts:");
    for a in &attempts {
        let _ = writeln!(
            summary,
            "  {}: {}",
            a.method,
            a.failure.as_deref().unwrap_or("equilibrium found")
        );
    }
    result.attempts = Some(attempts);
    Ok(Completed { result, summary, code })
}

fn fill_equilibrium(r: &mut ResultFile, game: &GameSpec, eq: &Equilibrium, summary: &mut String) {
    r.provenance = Some(eq.provenance.name().into());
    r.kind = Some(eq.kind.to_string());
    r.pivot = eq.pivot.map(|p| p + 1);
    let _ = writeln!(summary, "equilibrium: {} (via {})", eq.kind, eq.provenance);
    if let Some(p) = eq.pivot {
        let _ = writeln!(summary, "mixing type: {}", p + 1);
    }
    match &eq.play {
        Play::Profile { sigma, tau, report } => {
            r.profile = Some(ProfileFile::from_core(sigma, tau));
            describe_profile(game, sigma, tau, &report.posteriors, summary);
            fill_profile_report(r, report, summary);
        }
        Play::Mediated { mechanism, report } => {
            r.mechanism = Some(MechanismFile::from_core(mechanism));
            describe_mechanism(mechanism, summary);
            fill_mediated_report(r, report, summary);
        }
    }
}

fn describe_profile(
    game: &GameSpec,
    sigma: &SenderStrategy,
    tau: &ReceiverStrategy,
    table: &PosteriorTable,
    summary: &mut String,
) {
    for k in 0..game.type_count() {
        let parts: Vec<String> = sigma.rows()[k]
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != Rational::from_integer(0.into()))
            .map(|(m, p)| format!("{} w.p. {p}", sigma.messages()[m]))
            .collect();
        let _ = writeln!(
            summary,
            "type {} ({}) sends {}",
            k + 1,
            game.ty(k).name,
            parts.join(", ")
        );
    }
    for e in &table.entries {
        let x = tau
            .proposal(&e.message)
            .map(point)
            .unwrap_or_else(|| "undefined".into());
        let _ = writeln!(
            summary,
            "message {}: mass {}, posterior {}, proposal {x}",
            e.message,
            e.mass,
            point(&e.belief)
        );
    }
}

fn describe_mechanism(m: &MediatedMechanism, summary: &mut String) {
    for (k, lottery) in m.lotteries.iter().enumerate() {
        let parts: Vec<String> = lottery
            .iter()
            .map(|o| format!("{} w.p. {} [{}]", point(&o.decision), o.probability, o.label))
            .collect();
        let _ = writeln!(summary, "report {}: {}", k + 1, parts.join(", "));
    }
}

fn fill_profile_report(r: &mut ResultFile, report: &CheckReport, summary: &mut String) {
    r.posteriors = Some(
        report
            .posteriors
            .entries
            .iter()
            .map(|e| PosteriorOut {
                message: e.message.clone(),
                mass: Q::from(&e.mass),
                belief: qs(&e.belief),
            })
            .collect(),
    );
    r.interim_payoffs = Some(qs(&report.interim_payoffs));
    r.receiver_ex_ante = Some(Q::from(&report.receiver_ex_ante));

    let (mode, v0) = match &report.mode {
        CheckMode::Limit => ("limit".to_string(), None),
        CheckMode::Exit { v0 } => ("exit".to_string(), Some(Q::from(v0))),
    };
    let checks = ProfileChecksOut {
        mode,
        v0,
        no_exit: NoExitOut {
            enforced: report.no_exit.enforced,
            holds: report.no_exit.holds,
            violations: report
                .no_exit
                .violations
                .iter()
                .map(|v| ExitViolationOut {
                    ty: v.ty + 1,
                    message: v.message.clone(),
                    shortfall: Q::from(&v.shortfall),
                })
                .collect(),
        },
        constrained_optimality: report
            .constrained_opt
            .per_message
            .iter()
            .map(|m| OptimalityOut {
                message: m.message.clone(),
                value: Q::from(&m.value),
                best: m.best.as_ref().map(Q::from),
                best_decision: m.best_decision.as_deref().map(qs),
                best_exit_set: one_based(m.best_exit_set),
                gap: m.gap.as_ref().map(Q::from),
                holds: m.holds,
            })
            .collect(),
        constrained_optimality_holds: report.constrained_opt.holds,
        incentive_compatibility: report
            .incentive
            .violations
            .iter()
            .map(|v| IcViolationOut {
                ty: v.ty + 1,
                message: v.message.clone(),
                deviation: v.deviation.clone(),
                gap: Q::from(&v.gap),
            })
            .collect(),
        incentive_compatibility_holds: report.incentive.holds,
        exit_types: one_based(report.exit_types),
        overall: report.overall,
    };

    if let CheckMode::Exit { v0 } = &report.mode {
        let _ = writeln!(summary, "receiver exit payoff v0 = {v0}");
    }
    let enforced = if report.no_exit.enforced {
        ""
    } else {
        " (reported only)"
    };
    let _ = writeln!(summary, "no exit: {}{enforced}", render::verdict(report.no_exit.holds));
    for v in &report.no_exit.violations {
        let _ = writeln!(
            summary,
            "  type {} rejects the proposal after {} (short by {})",
            v.ty + 1,
            v.message,
            v.shortfall
        );
    }
    let _ = writeln!(
        summary,
        "receiver optimality: {}",
        render::verdict(report.constrained_opt.holds)
    );
    for m in &report.constrained_opt.per_message {
        match (&m.best, &m.gap) {
            (Some(best), Some(gap)) => {
                let _ = write!(summary, "  {}: value {}, best {best}, gap {gap}", m.message, m.value);
                if !m.best_exit_set.is_empty() {
                    let _ = write!(summary, " (best lets {} exit)", m.best_exit_set);
                }
                let _ = writeln!(summary);
            }
            _ => {
                let _ = writeln!(
                    summary,
                    "  {}: no decision acceptable to the whole posterior support",
                    m.message
                );
            }
        }
    }
    let _ = writeln!(
        summary,
        "incentive compatibility: {}",
        render::verdict(report.incentive.holds)
    );
    for v in &report.incentive.violations {
        let _ = writeln!(
            summary,
            "  type {} sending {} gains {} by sending {}",
            v.ty + 1,
            v.message,
            v.gap,
            v.deviation
        );
    }
    if !report.exit_types.is_empty() {
        let _ = writeln!(summary, "types that exit on path: {}", report.exit_types);
    }
    let _ = writeln!(summary, "interim sender payoffs: {}", point(&report.interim_payoffs));
    let _ = writeln!(summary, "receiver ex ante: {}", report.receiver_ex_ante);
    let _ = writeln!(
        summary,
        "overall: {}",
        if report.overall {
            "equilibrium"
        } else {
            "not an equilibrium"
        }
    );
    r.checks = Some(ChecksOut::Profile(checks));
}

fn fill_mediated_report(r: &mut ResultFile, report: &MediatedReport, summary: &mut String) {
    r.interim_payoffs = Some(qs(&report.interim_payoffs));
    r.receiver_ex_ante = Some(Q::from(&report.receiver_ex_ante));
    let _ = writeln!(summary, "participation: {}", render::verdict(report.participation));
    let obeys = report.obedience.iter().all(|o| o.holds);
    let _ = writeln!(summary, "obedience: {}", render::verdict(obeys));
    for o in &report.obedience {
        let _ = writeln!(
            summary,
            "  {}: posterior {}, decision {}, value {}",
            o.label,
            point(&o.posterior),
            point(&o.decision),
            o.value
        );
    }
    let _ = writeln!(summary, "truth-telling: {}", render::verdict(report.truthful));
    for m in &report.misreports {
        let _ = writeln!(
            summary,
            "  type {} reporting {}: {} vs truthful {}",
            m.ty + 1,
            m.report + 1,
            m.deviating,
            m.truthful
        );
    }
    let _ = writeln!(summary, "interim sender payoffs: {}", point(&report.interim_payoffs));
    let _ = writeln!(summary, "receiver ex ante: {}", report.receiver_ex_ante);
    let _ = writeln!(
        summary,
        "overall: {}",
        if report.overall {
            "equilibrium"
        } else {
            "not an equilibrium"
        }
    );
    r.checks = Some(ChecksOut::Mediated(MediatedChecksOut {
        participation: report.participation,
        obedience: report
            .obedience
            .iter()
            .map(|o| ObedienceOut {
                label: o.label.clone(),
                posterior: qs(&o.posterior),
                decision: qs(&o.decision),
                value: Q::from(&o.value),
                best: o.best.as_ref().map(Q::from),
                holds: o.holds,
            })
            .collect(),
        misreports: report
            .misreports
            .iter()
            .map(|m| MisreportOut {
                ty: m.ty + 1,
                report: m.report + 1,
                truthful: Q::from(&m.truthful),
                deviating: Q::from(&m.deviating),
            })
            .collect(),
        truthful: report.truthful,
        overall: report.overall,
    }));
}

// ---- check -----------------------------------------------------------------

pub fn check(game_path: &Path, play_path: &Path, v0: Option<&Rational>) -> Result<Completed, CliError> {
    let (file, game) = load_game(game_path)?;
    let play = load_play(play_path)?;
    let mut pairs = vec![("game", path_str(game_path)), ("profile", path_str(play_path))];
    if let Some(v) = v0 {
        pairs.push(("v0", v.to_string()));
    }
    let mut result = ResultFile::new("check", args(&pairs), file.digest(), "checked");
    let mut summary = String::new();
    match play {
        PlayInput::Profile(p) => {
            let (sigma, tau) = p.to_core()?;
            let report = match v0 {
                None => check_limit_equilibrium(&game, &sigma, &tau)?,
                Some(v) => vetotalk_core::verify::check_v0_equilibrium(&game, v, &sigma, &tau)?,
            };
            describe_profile(&game, &sigma, &tau, &report.posteriors, &mut summary);
            fill_profile_report(&mut result, &report, &mut summary);
            result.profile = Some(p);
        }
        PlayInput::Mechanism(m) => {
            if v0.is_some() {
                return Err(CliError::Usage("--v0 applies to sender/receiver profiles only".into()));
            }
            let mechanism = m.to_core(&game)?;
            let report = check_mediated(&game, &mechanism)?;
            describe_mechanism(&mechanism, &mut summary);
            fill_mediated_report(&mut result, &report, &mut summary);
            result.mechanism = Some(m);
        }
    }
    Ok(Completed {
        result,
        summary,
        code: 0,
    })
}

// ---- threshold and bound ---------------------------------------------------

pub fn threshold(game_path: &Path, play_path: &Path) -> Result<Completed, CliError> {
    let (file, game) = load_game(game_path)?;
    let PlayInput::Profile(p) = load_play(play_path)? else {
        return Err(CliError::Usage(
            "threshold needs a sender/receiver profile, not a mechanism".into(),
        ));
    };
    let (sigma, tau) = p.to_core()?;
    let t = exit_threshold(&game, &sigma, &tau)?;

    let mut summary = String::new();
    for m in &t.per_message {
        let _ = writeln!(
            summary,
            "message {}: v0 <= {} (binding alternative serves {})",
            m.message,
            m.threshold,
            if m.binding.is_empty() {
                "nobody".to_string()
            } else {
                m.binding.to_string()
            }
        );
    }
    let _ = writeln!(summary, "minimum over messages: {}", t.uncapped);
    let _ = writeln!(summary, "admissibility cap (min V over X): {}", t.admissibility_cap);
    let _ = writeln!(summary, "overall threshold: {}", t.overall);

    let mut result = ResultFile::new(
        "threshold",
        args(&[("game", path_str(game_path)), ("profile", path_str(play_path))]),
        file.digest(),
        "threshold",
    );
    result.threshold = Some(ThresholdOut {
        per_message: t
            .per_message
            .iter()
            .map(|m| MessageThresholdOut {
                message: m.message.clone(),
                threshold: Q::from(&m.threshold),
                binding: one_based(m.binding),
            })
            .collect(),
        uncapped: Q::from(&t.uncapped),
        admissibility_cap: Q::from(&t.admissibility_cap),
        overall: Q::from(&t.overall),
    });
    result.profile = Some(p);
    Ok(Completed {
        result,
        summary,
        code: 0,
    })
}

pub fn bound(game_path: &Path) -> Result<Completed, CliError> {
    let (file, game) = load_game(game_path)?;
    let (v_star, eq) = best_partitional_value(&game)?;
    let b = mechanism_bound(&game, &v_star)?;
    let cells = eq.cells().unwrap_or_default();

    let mut summary = String::new();
    let labels: Vec<String> = cells.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(
        summary,
        "best partitional equilibrium: {} with receiver value {}",
        labels.join(" "),
        b.v_star
    );
    let _ = writeln!(summary, "highest receiver payoff over X: {}", b.v_bar);
    let _ = writeln!(summary, "smallest prior: {} (type {})", b.p_min, b.k_min + 1);
    let _ = writeln!(summary, "bound on v0: {}", b.bound);

    let mut result = ResultFile::new("bound", args(&[("game", path_str(game_path))]), file.digest(), "bound");
    result.bound = Some(BoundOut {
        v_star: Q::from(&b.v_star),
        partition: cells.iter().map(|c| one_based(*c)).collect(),
        v_bar: Q::from(&b.v_bar),
        smallest_prior_type: b.k_min + 1,
        p_min: Q::from(&b.p_min),
        bound: Q::from(&b.bound),
    });
    if let (Some(sigma), Some(tau)) = (eq.sigma(), eq.tau()) {
        result.profile = Some(ProfileFile::from_core(sigma, tau));
    }
    Ok(Completed {
        result,
        summary,
        code: 0,
    })
}
