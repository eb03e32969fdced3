use std::fmt::Write as _;

use serde::Serialize;
use tmdyn_core::config::ConfigurationView;
use tmdyn_core::phi::{eps_graph_from_table, GraphDocument, PhiRow};
use tmdyn_core::regularity::CertificateDocument;
use tmdyn_core::words::{count_words_oracle, entropy_estimates_with, ReportDocument};
use tmdyn_core::{
    check_regularity, check_strong_regularity, compile_gshift, entropy_lower_bound, phi_table, step, verify_conjugacy,
    ConjugacyReport, Direction, EntropyCertificate, HaltingMode, TuringMachine, Verdict, Witness, WordOptions,
};

use crate::args::{AnalyzeArgs, EntropyArgs, GraphArgs, GraphFormat, GshiftArgs, SimulateArgs};
use crate::source::{start_configuration, MachineInfo};
use crate::UsageError;

/// Output of a command: text for stdout and whether the analysis failed.
pub struct Output {
    pub text: String,
    pub failure: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failure: None }
    }
}

pub struct Context<'a> {
    pub machine: &'a TuringMachine,
    pub info: &'a MachineInfo,
    pub json: bool,
    pub seed: u64,
}

#[derive(Serialize)]
struct Header<'a> {
    tool: &'static str,
    version: &'static str,
    machine: &'a MachineInfo,
    halting_mode: HaltingMode,
    seed: u64,
}

impl<'a> Context<'a> {
    fn header(&self) -> Header<'a> {
        Header {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            machine: self.info,
            halting_mode: self.machine.halting_mode(),
            seed: self.seed,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct AnalysisReport<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    phi_table: Vec<PhiRow>,
    eps_graphs: Vec<GraphDocument>,
    strong_regularity: Option<CertificateDocument>,
    regularity: Option<CertificateDocument>,
    certificate: CertificateDocument,
    entropy: Option<ReportDocument>,
    conjugacy: ConjugacyReport,
}

pub fn analyze(cx: &Context, args: &AnalyzeArgs) -> Result<Output, UsageError> {
    let m = cx.machine;
    let table = phi_table(m);
    let graphs = Direction::BOTH.map(|d| eps_graph_from_table(m, &table, d).document(m));
    let as_document =
        |verdict, w: Option<Witness>| w.map(|w| EntropyCertificate { verdict, witness: Some(w) }.document(m));
    let strong = as_document(Verdict::StronglyRegular, check_strong_regularity(m).map(Witness::Strong));
    let regular = as_document(Verdict::Regular, check_regularity(m).map(Witness::Regular));
    let entropy = match args.n_max {
        Some(n) => Some(
            entropy_estimates_with::<f64>(m, n as usize, &WordOptions::default())
                .map_err(|e| UsageError(e.to_string()))?
                .document(m),
        ),
        None => None,
    };
    let conjugacy = verify_conjugacy(m, args.samples, cx.seed);
    let mut failure = None;
    if !conjugacy.all_passed() {
        failure = Some(format!("conjugacy check failed on {} of {} samples", conjugacy.failed, conjugacy.samples));
    } else if let Some(e) = entropy.as_ref().and_then(|r| r.error.clone()) {
        failure = Some(e);
    }
    let report = AnalysisReport {
        header: cx.header(),
        phi_table: table.rows(m),
        eps_graphs: graphs.to_vec(),
        strong_regularity: strong,
        regularity: regular,
        certificate: entropy_lower_bound(m).document(m),
        entropy,
        conjugacy,
    };
    let text = to_json(&report);
    match &args.output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?;
            Ok(Output { text: String::new(), failure })
        }
        None => Ok(Output { text, failure }),
    }
}

pub fn graph(cx: &Context, args: &GraphArgs) -> Output {
    let g = tmdyn_core::eps_graph(cx.machine, args.eps);
    if cx.json || args.format == GraphFormat::Json {
        Output::ok(to_json(&g.document(cx.machine)))
    } else {
        Output::ok(g.to_dot(cx.machine))
    }
}

#[derive(Serialize)]
struct OracleCheck {
    n: usize,
    count: u64,
    oracle: u64,
}

#[derive(Serialize)]
struct EntropyOutput<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    #[serde(flatten)]
    report: ReportDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<Vec<OracleCheck>>,
}

pub fn entropy(cx: &Context, args: &EntropyArgs) -> Result<Output, UsageError> {
    let m = cx.machine;
    let mut opts = WordOptions::default();
    if let Some(b) = args.node_budget {
        opts.node_budget = b;
    }
    let report = entropy_estimates_with::<f64>(m, args.n_max as usize, &opts).map_err(|e| UsageError(e.to_string()))?;
    let mut failure = report.error.as_ref().map(|e| e.to_string());
    let oracle = if args.oracle {
        let mut checks = Vec::new();
        for row in report.rows.iter().filter(|r| r.n <= 4) {
            let expected = count_words_oracle(m, row.n).map_err(|e| UsageError(e.to_string()))?;
            if expected != row.count && failure.is_none() {
                failure = Some(format!("oracle mismatch at n = {}: counted {}, oracle {expected}", row.n, row.count));
            }
            checks.push(OracleCheck { n: row.n, count: row.count, oracle: expected });
        }
        if failure.is_none() {
            eprintln!("oracle cross-check passed for n ≤ {}", checks.len());
        }
        Some(checks)
    } else {
        None
    };
    let text = if cx.json {
        to_json(&EntropyOutput { header: cx.header(), report: report.document(m), oracle })
    } else {
        report.to_csv()
    };
    Ok(Output { text, failure })
}

#[derive(Serialize)]
struct SimulationStep {
    step: u64,
    /// The rule applied to reach this configuration.
    rule: Option<String>,
    configuration: ConfigurationView,
}

#[derive(Serialize)]
struct Simulation<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    steps: Vec<SimulationStep>,
    halted: bool,
    halting_time: Option<u64>,
}

pub fn simulate(cx: &Context, args: &SimulateArgs) -> Result<Output, UsageError> {
    let m = cx.machine;
    let mut x = start_configuration(m, args.state.as_deref(), &args.tape)?;
    let mut shown = Vec::new();
    let mut halting_time = m.is_halting(x.state()).then_some(0);
    let mut t = 0;
    let mut last = None;
    if args.trace {
        shown.push((0, x.clone(), None));
    }
    while t < args.steps && halting_time.is_none() {
        let rule = m.action(x.state(), x.head_symbol());
        let rule = format!(
            "{} {} -> {} {} {}",
            m.state_name(x.state()),
            m.symbol_name(x.head_symbol()),
            m.state_name(rule.next),
            m.symbol_name(rule.write),
            rule.shift.letter()
        );
        x = step(m, &x);
        t += 1;
        if m.is_halting(x.state()) {
            halting_time = Some(t);
        }
        if args.trace {
            shown.push((t, x.clone(), Some(rule)));
        } else {
            last = Some(rule);
        }
    }
    if !args.trace {
        shown.push((t, x, last));
    }
    let text = if cx.json {
        to_json(&Simulation {
            header: cx.header(),
            steps: shown
                .iter()
                .map(|(i, x, rule)| SimulationStep {
                    step: *i,
                    rule: rule.clone(),
                    configuration: ConfigurationView::new(m, x),
                })
                .collect(),
            halted: halting_time.is_some(),
            halting_time,
        })
    } else {
        let mut out = String::new();
        for (i, x, rule) in &shown {
            let _ = write!(out, "{i}: {}", x.render_around(m, 1));
            match rule {
                Some(r) => {
                    let _ = writeln!(out, "   [{r}]");
                }
                None => out.push('\n'),
            }
        }
        if let Some(n) = halting_time {
            let _ = writeln!(out, "halting time: {n}");
        }
        out
    };
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    conjugacy: ConjugacyReport,
}

pub fn gshift(cx: &Context, args: &GshiftArgs) -> Output {
    let m = cx.machine;
    if args.dump {
        return Output::ok(to_json(&compile_gshift(m).document()));
    }
    let samples = args.verify.unwrap_or(0);
    let report = verify_conjugacy(m, samples, cx.seed);
    let failure = (!report.all_passed()).then(|| format!("conjugacy failed on {} of {samples} samples", report.failed));
    let text = if cx.json {
        to_json(&VerifyOutput { header: cx.header(), conjugacy: report })
    } else {
        let mut out = format!("conjugacy: {}/{} passed (seed {})\n", report.passed, report.samples, report.seed);
        if let Some(c) = &report.first_counterexample {
            let _ = writeln!(out, "counterexample: {}", c.configuration);
            let _ = writeln!(out, "  expected {}", c.expected);
            let _ = writeln!(out, "  got      {}", c.got);
        }
        out
    };
    Output { text, failure }
}
