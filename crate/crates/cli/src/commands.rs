use std::io::Write;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use cyclefl::cut::{
    boundary_phi_bound, boundary_phi_max, normalize, phi, phi_boundary, phi_normalized,
    BoundaryParams, SegmentProfile,
};
use cyclefl::frac::{self, Rational};
use cyclefl::mechanism::ratio_of_lottery;
use cyclefl::oracle::{exact_scan_opt, raw_worst_case};
use cyclefl::search::{
    verify_bounds, verify_closed_forms, verify_reduction, verify_sp, worst_case, SearchConfig,
    DEFAULT_BUDGET,
};
use cyclefl::{rescale_profile, Error, Mechanism, MechanismRegistry, Profile};
use serde_json::{json, Value};

use crate::{Check, EvalArgs, PhiArgs, SearchArgs, VerifyArgs};

pub const BUDGET_VAR: &str = "CYCLEFL_BUDGET";

pub struct Report {
    /// False when violations were found.
    pub clean: bool,
    pub result: Value,
}

fn mechanism(name: &str) -> Result<Arc<dyn Mechanism>> {
    let reg = MechanismRegistry::with_builtins();
    reg.resolve(name).with_context(|| {
        let known: Vec<&str> = reg.names().collect();
        format!("known mechanisms: {}", known.join(", "))
    })
}

fn budget() -> Result<u128> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{BUDGET_VAR}={v:?} is not a non-negative integer")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn config(n: usize, l: usize, m: Arc<dyn Mechanism>, workers: Option<usize>) -> Result<SearchConfig> {
    let w = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    Ok(SearchConfig::new(n, l, m)?.workers(w)?.budget(budget()?))
}

fn with_guidance<T>(r: cyclefl::Result<T>) -> Result<T> {
    r.map_err(|e| {
        let hint = matches!(e, Error::BudgetExceeded { .. }).then(|| {
            format!("pass --max-distinct (e.g. 3) or raise {BUDGET_VAR}")
        });
        match hint {
            Some(h) => anyhow::Error::from(e).context(h),
            None => e.into(),
        }
    })
}

fn show(r: &Rational) -> String {
    frac::format(r)
}

pub fn eval(a: &EvalArgs, oracle: bool) -> Result<Report> {
    let b = match &a.cycle_length {
        Some(z) => {
            let raw = a
                .profile
                .split(',')
                .map(frac::parse)
                .collect::<cyclefl::Result<Vec<_>>>()?;
            rescale_profile(&raw, &frac::parse(z)?)?
        }
        None => Profile::parse_list(&a.profile)?,
    };
    let m = mechanism(&a.mechanism)?;
    let lottery = m.apply(&b)?;
    let apx = ratio_of_lottery(&b, &lottery)?;
    println!("profile   {b}");
    println!("mechanism {}", m.name());
    println!("lottery   {lottery}");
    println!("sc        {}", show(&apx.mechanism_sc));
    println!("opt       {} at {}", show(&apx.opt), apx.opt_point);
    println!("ratio     {}", show(&apx.ratio));
    let mut clean = true;
    if oracle {
        let scanned = exact_scan_opt(&b);
        clean = scanned == apx.opt;
        println!(
            "oracle    scan opt {} ({})",
            show(&scanned),
            if clean { "agrees" } else { "MISMATCH" }
        );
    }
    Ok(Report {
        clean,
        result: json!({
            "profile": b,
            "mechanism": m.name(),
            "lottery": lottery,
            "apx": apx,
        }),
    })
}

pub fn search(a: &SearchArgs, oracle: bool) -> Result<Report> {
    let m = mechanism(&a.mechanism)?;
    let mut records = Vec::new();
    let mut clean = true;
    for l in a.l.lo..=a.l.hi {
        let c = config(a.n, l, m.clone(), a.workers)?.max_distinct(a.max_distinct)?;
        let r = with_guidance(worst_case(&c))?;
        if oracle {
            let (raw, count) = raw_worst_case(m.as_ref(), a.n, l)?;
            let agrees = match a.max_distinct {
                None => raw == r.max_ratio && count == r.profiles_examined,
                Some(_) => raw >= r.max_ratio,
            };
            clean &= agrees;
            eprintln!(
                "oracle l={l}: raw max {} over {count} profiles ({})",
                show(&raw),
                if agrees { "agrees" } else { "MISMATCH" }
            );
        }
        records.push(r);
    }

    let sink: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(
            std::fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        ),
        None => Box::new(std::io::stdout()),
    };
    let mut out = csv::Writer::from_writer(sink);
    out.write_record([
        "n",
        "l",
        "max_ratio_num",
        "max_ratio_den",
        "max_ratio_decimal",
        "witness",
        "classes",
        "restricted_flag",
    ])?;
    for r in &records {
        out.write_record([
            r.n.to_string(),
            r.l.to_string(),
            r.max_ratio.numer().to_string(),
            r.max_ratio.denom().to_string(),
            format!("{:.6}", frac::to_f64(&r.max_ratio)),
            r.witness.to_list_string(),
            r.canonical_classes.to_string(),
            r.max_distinct.is_some().to_string(),
        ])?;
    }
    out.flush()?;

    let top = records
        .iter()
        .reduce(|x, y| if y.max_ratio > x.max_ratio { y } else { x })
        .expect("range is non-empty");
    let below = top.max_ratio < frac::ratio(3, 2);
    let summary = format!(
        "overall max {} at l={} witness {}; below 3/2: {}",
        show(&top.max_ratio),
        top.l,
        top.witness,
        if below { "yes" } else { "no" }
    );
    if a.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(Report {
        clean,
        result: json!({ "records": records, "below_three_halves": below }),
    })
}

pub fn verify(a: &VerifyArgs) -> Result<Report> {
    let m = mechanism(&a.mechanism)?;
    let mut total = 0usize;
    let mut summaries = Vec::new();
    for l in a.l.lo..=a.l.hi {
        for check in &a.checks {
            let (name, examined, rows): (&str, usize, Vec<String>) = match check {
                Check::Sp => {
                    let c = config(a.n, l, m.clone(), a.workers)?;
                    let examined = with_guidance(c.classes())?.len();
                    let rows = verify_sp(&c)?
                        .into_iter()
                        .map(|v| {
                            format!(
                                "SpViolation profile={} agent={} deviation={} truthful_cost={} deviated_cost={}",
                                v.profile,
                                v.agent,
                                v.deviation,
                                show(&v.truthful_cost),
                                show(&v.deviated_cost)
                            )
                        })
                        .collect();
                    ("sp", examined, rows)
                }
                Check::Bounds => {
                    let r = with_guidance(verify_bounds(&config(a.n, l, m.clone(), a.workers)?))?;
                    let rows = r
                        .violations
                        .iter()
                        .map(|v| {
                            format!(
                                "BoundViolation profile={} normalized={} ratio={} phi={} kind={}",
                                v.profile,
                                v.normalized,
                                show(&v.ratio),
                                v.phi.as_deref().unwrap_or("undefined"),
                                v.kind
                            )
                        })
                        .collect();
                    println!(
                        "bounds n={} l={l}: max ratio {}, max phi {}",
                        a.n,
                        show(&r.max_ratio),
                        show(&r.max_phi)
                    );
                    ("bounds", r.classes_checked, rows)
                }
                Check::ClosedForms | Check::Reduction => {
                    let r = if *check == Check::ClosedForms {
                        verify_closed_forms(a.n, l)?
                    } else {
                        verify_reduction(a.n, l)?
                    };
                    let rows = r
                        .violations
                        .iter()
                        .map(|v| format!("Violation profile={} detail={}", v.profile, v.detail))
                        .collect();
                    (
                        if *check == Check::ClosedForms { "closed-forms" } else { "reduction" },
                        r.examined,
                        rows,
                    )
                }
            };
            println!(
                "{name} n={} l={l}: examined {examined}, {} violations",
                a.n,
                rows.len()
            );
            for row in &rows {
                println!("  {row}");
            }
            total += rows.len();
            summaries.push(json!({
                "check": name,
                "l": l,
                "examined": examined,
                "violations": rows,
            }));
        }
    }
    println!(
        "{}",
        if total == 0 {
            "all checks passed".to_string()
        } else {
            format!("{total} violations")
        }
    );
    Ok(Report {
        clean: total == 0,
        result: json!({ "checks": summaries }),
    })
}

fn phi_of_input(s: &str) -> Result<Rational> {
    let values = s
        .split(',')
        .map(frac::parse)
        .collect::<cyclefl::Result<Vec<_>>>()?;
    if values.iter().all(num_is_zero) {
        return Err(Error::PhiUndefined.into());
    }
    if let Ok(seg) = SegmentProfile::new(values) {
        return Ok(phi(&seg));
    }
    let b = Profile::parse_list(s)?;
    Ok(phi_normalized(&normalize(&b)?)?)
}

fn num_is_zero(r: &Rational) -> bool {
    *r.numer() == 0.into()
}

pub fn phi_cmd(a: &PhiArgs) -> Result<Report> {
    if let Some(s) = &a.profile {
        let v = phi_of_input(s)?;
        println!("{}", show(&v));
        return Ok(Report {
            clean: true,
            result: json!({ "phi": show(&v) }),
        });
    }
    if let Some(s) = &a.boundary {
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("{s:?} is not k,m_plus,m_minus"))?;
        let [k, m_plus, m_minus] = parts[..] else {
            bail!("expected three values k,m_plus,m_minus, got {s:?}");
        };
        let p = BoundaryParams::new(k, m_minus, m_plus)?;
        let v = phi_boundary(&p)?;
        println!("{}", show(&v));
        let mut result = json!({ "phi_boundary": show(&v) });
        if p.is_dominated() {
            let expanded = phi(&p.expand()?);
            eprintln!(
                "note: these parameters are dominated; phi of the expanded profile is {}",
                show(&expanded)
            );
            result["phi_expanded"] = json!(show(&expanded));
        }
        return Ok(Report { clean: true, result });
    }
    let kmax = a.kmax.expect("clap requires one input mode");
    if kmax == 0 {
        bail!("--kmax must be at least 1");
    }
    let cap = frac::ratio(7, 4);
    let mut clean = true;
    let mut rows = Vec::new();
    println!("k,max,bound,m_minus,m_plus");
    for k in 1..=kmax {
        let (max, at) = boundary_phi_max(k)?;
        let bound = boundary_phi_bound(k);
        clean &= max <= bound && bound <= cap;
        println!("{k},{},{},{},{}", show(&max), show(&bound), at.m_minus, at.m_plus);
        rows.push(json!({ "k": k, "max": show(&max), "bound": show(&bound), "at": at }));
    }
    println!("all rows <= 7/4: {}", if clean { "yes" } else { "no" });
    Ok(Report {
        clean,
        result: json!({ "rows": rows }),
    })
}
