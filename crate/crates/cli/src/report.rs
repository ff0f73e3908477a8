//! Merges the FCI and VQE summaries found in a run directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use qembed_core::units::HARTREE_TO_EV;

use crate::error::CliError;
use crate::output::Outputs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Sector {
    n_alpha: u64,
    n_beta: u64,
    /// `2 M_S`, kept integral so sectors order and compare exactly.
    ms2: i64,
}

struct Row {
    source: String,
    label: String,
    energy: f64,
}

/// `*.json` summaries in `dir` and its immediate subdirectories, sorted by path.
fn summaries(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let read = |d: &Path| -> Result<Vec<PathBuf>, CliError> {
        let entries = std::fs::read_dir(d).map_err(|e| CliError::input(format!("cannot read {}: {e}", d.display())))?;
        Ok(entries.filter_map(|e| e.ok().map(|e| e.path())).collect())
    };
    let mut found = Vec::new();
    for p in read(dir)? {
        if p.is_dir() {
            found.extend(read(&p)?.into_iter().filter(|q| q.is_file()));
        } else {
            found.push(p);
        }
    }
    found.retain(|p| p.extension().is_some_and(|e| e == "json"));
    found.sort();
    Ok(found)
}

fn sector_of(v: &Value) -> Option<Sector> {
    let s = v.get("sector")?;
    let n_alpha = s.get("n_alpha")?.as_u64()?;
    let n_beta = s.get("n_beta")?.as_u64()?;
    Some(Sector {
        n_alpha,
        n_beta,
        ms2: n_alpha as i64 - n_beta as i64,
    })
}

pub fn report(dir: &Path) -> Result<Outputs, CliError> {
    if !dir.is_dir() {
        return Err(CliError::input(format!("{} is not a directory", dir.display())));
    }
    let mut groups: BTreeMap<Sector, Vec<Row>> = BTreeMap::new();
    for path in summaries(dir)? {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        let Ok(v) = serde_json::from_str::<Value>(&text) else {
            continue;
        };
        let Some(sector) = sector_of(&v) else {
            continue;
        };
        let source = path.strip_prefix(dir).unwrap_or(&path).display().to_string();
        let rows = groups.entry(sector).or_default();
        match v.get("kind").and_then(Value::as_str) {
            Some("fci") => {
                for st in v["states"].as_array().into_iter().flatten() {
                    let (Some(i), Some(e)) = (st["state"].as_u64(), st["energy_hartree"].as_f64()) else {
                        continue;
                    };
                    let s2 = st["s_squared"].as_f64().unwrap_or(f64::NAN);
                    rows.push(Row {
                        source: source.clone(),
                        label: format!("fci state {i} (S^2 = {s2:.4})"),
                        energy: e,
                    });
                }
            }
            Some("vqe") => {
                let r = &v["result"];
                let Some(e) = r["final_energy_hartree"].as_f64() else {
                    continue;
                };
                let a = &v["ansatz"];
                rows.push(Row {
                    source: source.clone(),
                    label: format!(
                        "vqe from {} ({} params, {}, {})",
                        a["reference"].as_str().unwrap_or("?"),
                        a["n_params"].as_u64().unwrap_or(0),
                        v["backend"]["name"].as_str().unwrap_or("?"),
                        if r["converged"].as_bool() == Some(true) { "converged" } else { "not converged" }
                    ),
                    energy: e,
                });
            }
            _ => {}
        }
    }
    groups.retain(|_, rows| !rows.is_empty());
    if groups.is_empty() {
        return Err(CliError::input(format!("no FCI or VQE summaries in {}", dir.display())));
    }

    let mut text = String::new();
    let mut json_groups = Vec::new();
    for (sector, rows) in groups.iter_mut() {
        rows.sort_by(|a, b| a.energy.total_cmp(&b.energy).then_with(|| a.source.cmp(&b.source)).then_with(|| a.label.cmp(&b.label)));
        let e0 = rows[0].energy;
        let _ = writeln!(
            text,
            "# n_alpha={} n_beta={} M_S={}",
            sector.n_alpha,
            sector.n_beta,
            sector.ms2 as f64 / 2.0
        );
        let _ = writeln!(text, "# {:>20} {:>18} {:>14}  {:<44} source", "energy_hartree", "energy_ev", "gap_ev", "entry");
        let mut items = Vec::new();
        for r in rows.iter() {
            let gap = (r.energy - e0) * HARTREE_TO_EV;
            let _ = writeln!(
                text,
                "  {:>20.12} {:>18.9} {:>14.9}  {:<44} {}",
                r.energy,
                r.energy * HARTREE_TO_EV,
                gap,
                r.label,
                r.source
            );
            items.push(json!({
                "entry": r.label,
                "source": r.source,
                "energy_hartree": r.energy,
                "energy_ev": r.energy * HARTREE_TO_EV,
                "gap_ev": gap,
            }));
        }
        text.push('\n');
        json_groups.push(json!({
            "n_alpha": sector.n_alpha,
            "n_beta": sector.n_beta,
            "ms": sector.ms2 as f64 / 2.0,
            "entries": items,
        }));
    }
    let mut out = Outputs::default();
    out.add("report.txt", text);
    out.json(
        "report.json",
        &json!({ "kind": "report", "hartree_to_ev": HARTREE_TO_EV, "groups": json_groups }),
    );
    Ok(out)
}
