//! Result rendering: aligned text tables, CSV, and JSON.
//!
//! Numeric precision is uniform across formats: utilities and probabilities
//! get 4 decimal places, shares 2, β 4 significant figures. JSON carries
//! numbers rounded to the same precision so repeated runs are byte-stable.

use fairdiv_core::{
    Allocation, ComparisonReport, Criterion, DivisionProblem, ProbabilityMatrix, SmallBetaReport,
    UtilityCurve,
};
use serde_json::{json, Map, Value};

/// Fixed decimal places; values that round to zero print positive.
pub fn fixed(x: f64, decimals: usize) -> String {
    let scale = 10f64.powi(decimals as i32);
    let v = if (x * scale).round() == 0.0 { 0.0 } else { x };
    format!("{v:.decimals$}")
}

fn sig4_decimals(x: f64) -> i32 {
    let exponent = x.abs().log10().floor() as i32;
    (3 - exponent).max(0)
}

/// 4 significant figures, plain decimal notation.
pub fn sig4(x: f64) -> String {
    if x == 0.0 {
        return "0.000".to_string();
    }
    let decimals = sig4_decimals(x) as usize;
    format!("{x:.decimals$}")
}

/// Rounds to `decimals` places; −0.0 normalizes to 0.0.
pub fn round_dp(x: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    let r = (x * scale).round() / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Rounds to 4 significant figures (for JSON β values).
pub fn round_sig4(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    round_dp(x, sig4_decimals(x))
}

/// Aligned table: first column left, the rest right. The first row is the
/// header.
pub fn table(rows: &[Vec<String>]) -> String {
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0usize; columns];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i == 0 {
                line.push_str(&format!("{cell:<width$}", width = widths[i]));
            } else {
                line.push_str(&format!("{cell:>width$}", width = widths[i]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Everything `solve` needs to render one result.
pub struct SolveView<'a> {
    pub problem: &'a DivisionProblem,
    pub beta: f64,
    /// False when --beta fixed the value; search diagnostics are omitted.
    pub searched: bool,
    pub boundary: bool,
    pub degenerate: bool,
    pub extremum_residual: f64,
    pub total_utility: f64,
    pub allocation: &'a Allocation,
    pub probabilities: Option<&'a [f64]>,
    pub flavor_probabilities: Option<&'a ProbabilityMatrix>,
    pub sampled: Option<SampledView<'a>>,
}

pub struct SampledView<'a> {
    pub seed: u64,
    pub units: u64,
    pub allocation: &'a Allocation,
}

pub fn solve_text(view: &SolveView) -> String {
    let problem = view.problem;
    let mut out = format!(
        "Players: {}   Cake size: {}\n",
        problem.n(),
        fixed(problem.cake_size(), 2)
    );
    if view.searched {
        out.push_str(&format!(
            "beta* = {}   total utility = {}\n",
            sig4(view.beta),
            fixed(view.total_utility, 4)
        ));
        if view.degenerate {
            out.push_str(
                "note: total utility does not depend on beta for this problem; reporting beta = 0\n",
            );
        } else if view.boundary {
            out.push_str(&format!(
                "boundary maximum, |dU/dbeta| = {}\n",
                sig4(view.extremum_residual)
            ));
        } else {
            out.push_str(&format!(
                "interior maximum, |dU/dbeta| = {}\n",
                sig4(view.extremum_residual)
            ));
        }
    } else {
        out.push_str(&format!(
            "beta = {} (fixed)   total utility = {}\n",
            sig4(view.beta),
            fixed(view.total_utility, 4)
        ));
    }
    out.push('\n');

    let mut rows = Vec::new();
    if let Some(probabilities) = view.probabilities {
        rows.push(
            ["Player", "Contribution", "Need", "Probability", "Share"]
                .map(String::from)
                .to_vec(),
        );
        for (j, player) in problem.players().iter().enumerate() {
            rows.push(vec![
                player.id.clone(),
                fixed(player.contribution, 2),
                fixed(player.need, 2),
                fixed(probabilities[j], 4),
                fixed(view.allocation.per_player()[j], 2),
            ]);
        }
        rows.push(vec![
            "Total".to_string(),
            String::new(),
            String::new(),
            fixed(probabilities.iter().sum(), 4),
            fixed(view.allocation.total(), 2),
        ]);
    } else {
        rows.push(
            ["Player", "Contribution", "Need", "Share"]
                .map(String::from)
                .to_vec(),
        );
        for (j, player) in problem.players().iter().enumerate() {
            rows.push(vec![
                player.id.clone(),
                fixed(player.contribution, 2),
                fixed(player.need, 2),
                fixed(view.allocation.per_player()[j], 2),
            ]);
        }
        rows.push(vec![
            "Total".to_string(),
            String::new(),
            String::new(),
            fixed(view.allocation.total(), 2),
        ]);
    }
    out.push_str(&table(&rows));

    if let (Some((layout, _)), Some(per_flavor)) =
        (problem.heterogeneity(), view.allocation.per_flavor())
    {
        out.push_str("\nFlavor shares\n");
        let mut rows = Vec::new();
        let mut header = vec!["Player".to_string()];
        header.extend(layout.flavors.iter().cloned());
        header.push("Total".to_string());
        rows.push(header);
        for (j, player) in problem.players().iter().enumerate() {
            let mut row = vec![player.id.clone()];
            row.extend(per_flavor[j].iter().map(|&x| fixed(x, 2)));
            row.push(fixed(view.allocation.per_player()[j], 2));
            rows.push(row);
        }
        let mut size_row = vec!["Size".to_string()];
        size_row.extend(layout.sizes.iter().map(|&s| fixed(s, 2)));
        size_row.push(fixed(layout.sizes.iter().sum(), 2));
        rows.push(size_row);
        out.push_str(&table(&rows));
    }

    if let Some(sampled) = &view.sampled {
        out.push_str(&format!(
            "\nSampled shares ({} units, seed {})\n",
            sampled.units, sampled.seed
        ));
        let mut rows = vec![["Player", "Share"].map(String::from).to_vec()];
        for (player, &share) in problem
            .players()
            .iter()
            .zip(sampled.allocation.per_player())
        {
            rows.push(vec![player.id.clone(), fixed(share, 2)]);
        }
        out.push_str(&table(&rows));
    }
    out
}

pub fn solve_csv(view: &SolveView) -> String {
    let problem = view.problem;
    let beta = sig4(view.beta);
    let total = fixed(view.total_utility, 4);
    let sampled_header = if view.sampled.is_some() {
        ",sampled_share"
    } else {
        ""
    };
    let mut out;
    match (view.flavor_probabilities, problem.heterogeneity()) {
        (Some(matrix), Some((layout, _))) => {
            out = format!("player,flavor,probability,share,beta,total_utility{sampled_header}\n");
            let per_flavor = view.allocation.per_flavor().expect("flavored allocation");
            for (j, player) in problem.players().iter().enumerate() {
                for (i, name) in layout.flavors.iter().enumerate() {
                    out.push_str(&format!(
                        "{},{},{},{},{},{}",
                        player.id,
                        name,
                        fixed(matrix.rows()[j][i], 4),
                        fixed(per_flavor[j][i], 2),
                        beta,
                        total
                    ));
                    if let Some(sampled) = &view.sampled {
                        let flavored = sampled
                            .allocation
                            .per_flavor()
                            .expect("flavored sample");
                        out.push_str(&format!(",{}", fixed(flavored[j][i], 2)));
                    }
                    out.push('\n');
                }
            }
        }
        _ => {
            out = format!("player,contribution,need,probability,share,beta,total_utility{sampled_header}\n");
            let probabilities = view.probabilities.expect("plain problem probabilities");
            for (j, player) in problem.players().iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}",
                    player.id,
                    fixed(player.contribution, 2),
                    fixed(player.need, 2),
                    fixed(probabilities[j], 4),
                    fixed(view.allocation.per_player()[j], 2),
                    beta,
                    total
                ));
                if let Some(sampled) = &view.sampled {
                    out.push_str(&format!(
                        ",{}",
                        fixed(sampled.allocation.per_player()[j], 2)
                    ));
                }
                out.push('\n');
            }
        }
    }
    out
}

pub fn solve_json(view: &SolveView) -> String {
    let problem = view.problem;
    let mut root = Map::new();
    root.insert("beta".into(), json!(round_sig4(view.beta)));
    root.insert("searched".into(), json!(view.searched));
    if view.searched {
        root.insert("boundary".into(), json!(view.boundary));
        root.insert("degenerate".into(), json!(view.degenerate));
        root.insert(
            "extremum_residual".into(),
            json!(round_sig4(view.extremum_residual)),
        );
    }
    root.insert("cake_size".into(), json!(round_dp(problem.cake_size(), 2)));
    root.insert(
        "total_utility".into(),
        json!(round_dp(view.total_utility, 4)),
    );
    let players: Vec<Value> = problem
        .players()
        .iter()
        .enumerate()
        .map(|(j, player)| {
            let mut entry = Map::new();
            entry.insert("id".into(), json!(player.id));
            entry.insert("contribution".into(), json!(round_dp(player.contribution, 2)));
            entry.insert("need".into(), json!(round_dp(player.need, 2)));
            if let Some(probabilities) = view.probabilities {
                entry.insert("probability".into(), json!(round_dp(probabilities[j], 4)));
            }
            entry.insert(
                "share".into(),
                json!(round_dp(view.allocation.per_player()[j], 2)),
            );
            if let (Some(matrix), Some((layout, _)), Some(per_flavor)) = (
                view.flavor_probabilities,
                problem.heterogeneity(),
                view.allocation.per_flavor(),
            ) {
                let mut flavors = Map::new();
                for (i, name) in layout.flavors.iter().enumerate() {
                    flavors.insert(
                        name.clone(),
                        json!({
                            "probability": round_dp(matrix.rows()[j][i], 4),
                            "share": round_dp(per_flavor[j][i], 2),
                        }),
                    );
                }
                entry.insert("flavors".into(), Value::Object(flavors));
            }
            if let Some(sampled) = &view.sampled {
                entry.insert(
                    "sampled_share".into(),
                    json!(round_dp(sampled.allocation.per_player()[j], 2)),
                );
            }
            Value::Object(entry)
        })
        .collect();
    root.insert("players".into(), Value::Array(players));
    if let Some(sampled) = &view.sampled {
        root.insert(
            "sampling".into(),
            json!({"seed": sampled.seed, "units": sampled.units}),
        );
    }
    pretty(Value::Object(root))
}

pub struct CompareView<'a> {
    pub problem: &'a DivisionProblem,
    pub beta: f64,
    pub report: &'a ComparisonReport,
}

pub fn compare_text(view: &CompareView) -> String {
    let problem = view.problem;
    let mut out = format!("beta* = {}\n", sig4(view.beta));
    if problem.is_heterogeneous() {
        out.push_str("flavored problem: baseline criteria divide the cake total only\n");
    }
    out.push('\n');
    let mut rows = Vec::new();
    let mut header = vec!["Player".to_string()];
    for criterion in Criterion::ALL {
        header.push(criterion.label().to_string());
        header.push("Def".to_string());
        header.push("Utility".to_string());
    }
    rows.push(header);
    for (j, player) in problem.players().iter().enumerate() {
        let mut row = vec![player.id.clone()];
        for criterion in Criterion::ALL {
            let entry = view.report.criterion(criterion);
            row.push(fixed(entry.allocation.per_player()[j], 2));
            row.push(fixed(entry.deficiency[j], 2));
            row.push(fixed(entry.utilities[j], 4));
        }
        rows.push(row);
    }
    let mut totals = vec!["Total utility".to_string()];
    for criterion in Criterion::ALL {
        totals.push(fixed(view.report.criterion(criterion).total_utility, 4));
        totals.push(String::new());
        totals.push(String::new());
    }
    rows.push(totals);
    out.push_str(&table(&rows));

    out.push_str("\nPreferred criteria, best first\n");
    let mut rows = Vec::new();
    for (j, player) in problem.players().iter().enumerate() {
        let order: Vec<&str> = view.report.preferred[j]
            .iter()
            .map(|c| c.label())
            .collect();
        rows.push(vec![format!("{}:", player.id), order.join(" > ")]);
    }
    let mut listing = String::new();
    for row in rows {
        listing.push_str(&format!("{} {}\n", row[0], row[1]));
    }
    out.push_str(&listing);
    out
}

pub fn compare_csv(view: &CompareView) -> String {
    let mut out = String::from("player,criterion,share,deficiency,utility\n");
    for (j, player) in view.problem.players().iter().enumerate() {
        for criterion in Criterion::ALL {
            let entry = view.report.criterion(criterion);
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                player.id,
                criterion.key(),
                fixed(entry.allocation.per_player()[j], 2),
                fixed(entry.deficiency[j], 2),
                fixed(entry.utilities[j], 4),
            ));
        }
    }
    out
}

pub fn compare_json(view: &CompareView) -> String {
    let problem = view.problem;
    let criteria: Vec<Value> = view
        .report
        .criteria
        .iter()
        .map(|entry| {
            let players: Vec<Value> = problem
                .players()
                .iter()
                .enumerate()
                .map(|(j, player)| {
                    json!({
                        "id": player.id,
                        "share": round_dp(entry.allocation.per_player()[j], 2),
                        "deficiency": round_dp(entry.deficiency[j], 2),
                        "utility": round_dp(entry.utilities[j], 4),
                    })
                })
                .collect();
            json!({
                "criterion": entry.criterion.key(),
                "total_utility": round_dp(entry.total_utility, 4),
                "players": players,
            })
        })
        .collect();
    let preferred: Vec<Value> = problem
        .players()
        .iter()
        .zip(&view.report.preferred)
        .map(|(player, order)| {
            json!({
                "player": player.id,
                "order": order.iter().map(|c| c.key()).collect::<Vec<_>>(),
            })
        })
        .collect();
    pretty(json!({
        "beta": round_sig4(view.beta),
        "criteria": criteria,
        "preferred": preferred,
    }))
}

/// CSV with the exact header `beta,total_utility`.
pub fn curve_csv(curve: &UtilityCurve) -> String {
    let mut out = String::from("beta,total_utility\n");
    for &(beta, utility) in curve.samples() {
        out.push_str(&format!("{},{}\n", sig4(beta), fixed(utility, 4)));
    }
    out
}

pub fn curve_summary(curve: &UtilityCurve) -> String {
    let (beta, utility) = curve.argmax();
    format!(
        "maximum total utility {} at beta = {} over {} samples",
        fixed(utility, 4),
        sig4(beta),
        curve.samples().len()
    )
}

pub struct DiagnoseView<'a> {
    pub problem: &'a DivisionProblem,
    pub report: &'a SmallBetaReport,
}

pub fn diagnose_text(view: &DiagnoseView) -> String {
    let problem = view.problem;
    let report = view.report;
    let uniform = problem.cake_size() / problem.n() as f64;
    let mut out = format!("Slopes at the uniform share {}\n", fixed(uniform, 2));
    let mut rows = vec![["Player", "Contribution", "Slope"].map(String::from).to_vec()];
    for (player, &slope) in problem.players().iter().zip(&report.slopes) {
        rows.push(vec![
            player.id.clone(),
            fixed(player.contribution, 2),
            sig4(slope),
        ]);
    }
    out.push_str(&table(&rows));
    out.push_str(&format!(
        "\nmean slope = {}   mean contribution = {}\n",
        sig4(report.mean_slope),
        sig4(report.mean_contribution)
    ));
    out.push_str(&format!(
        "mean(slope x contribution) = {}   mean(slope) x mean(contribution) = {}\n",
        sig4(report.lhs),
        sig4(report.rhs)
    ));
    out.push_str(&format!(
        "predicts interior maximum: {}\n",
        if report.predicts_interior_maximum {
            "yes"
        } else {
            "no"
        }
    ));
    out
}

pub fn diagnose_csv(view: &DiagnoseView) -> String {
    let mut out = String::from("player,contribution,slope\n");
    for (player, &slope) in view.problem.players().iter().zip(&view.report.slopes) {
        out.push_str(&format!(
            "{},{},{}\n",
            player.id,
            fixed(player.contribution, 2),
            sig4(slope)
        ));
    }
    out
}

pub fn diagnose_json(view: &DiagnoseView) -> String {
    let report = view.report;
    let players: Vec<Value> = view
        .problem
        .players()
        .iter()
        .zip(&report.slopes)
        .map(|(player, &slope)| {
            json!({
                "id": player.id,
                "contribution": round_dp(player.contribution, 2),
                "slope": round_sig4(slope),
            })
        })
        .collect();
    pretty(json!({
        "uniform_share": round_dp(view.problem.cake_size() / view.problem.n() as f64, 2),
        "players": players,
        "mean_slope": round_sig4(report.mean_slope),
        "mean_contribution": round_sig4(report.mean_contribution),
        "lhs": round_sig4(report.lhs),
        "rhs": round_sig4(report.rhs),
        "predicts_interior_maximum": report.predicts_interior_maximum,
    }))
}

fn pretty(value: Value) -> String {
    let mut out = serde_json::to_string_pretty(&value).expect("report serializes");
    out.push('\n');
    out
}
