use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use passive_battery::activation::{
    activates, activation_condition_3d, bath_activation_bound, max_excited_population, thermo_majorization_curve,
};
use passive_battery::charging::{brute_force_charge, charging_possible, optimal_charge};
use passive_battery::discharging::{discharging_possible, optimal_discharge};
use passive_battery::figures::{capacity_samples, lorenz_data, pollution_grid};
use passive_battery::geometry::{
    detect_active, evaluate_witness, facet_witnesses, gibbs_parameter, on_boundary, polytope_vertices,
    vertex_decomposition,
};
use passive_battery::multicopy::{min_copies_to_charge, CopySearch};
use passive_battery::{InverseTemperature, QubitBattery};
use serde_json::{json, Map, Value};

mod input;
mod output;

use input::Malformed;
use output::{cell, num, nums};

/// Passive ancillas as chargers and dischargers of a qubit battery.
///
/// State vectors are comma-separated probabilities over the unit ladder
/// `0, 1, ..., d-1`; the battery is `p0,p1` with unit gap.
#[derive(Parser)]
#[command(name = "pbl", version)]
struct Cli {
    /// Emit `field,value` CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Passive, active or thermal verdict for a state.
    Passivity { state: String },
    /// Vertices of the passive polytope of the d-level ladder.
    Vertices { d: usize },
    /// Barycentric weights of a passive state over the polytope vertices.
    Decompose { state: String },
    /// Optimal energy-conserving charging of the battery.
    Charge {
        battery: String,
        charger: String,
        /// Cross-check against the brute-force search over shell permutations.
        #[arg(long)]
        oracle: bool,
    },
    /// Fewest charger copies that charge the battery.
    Mincopies {
        battery: String,
        charger: String,
        #[arg(long)]
        nmax: usize,
    },
    /// Whether the charger can push the battery past population inversion.
    Activate { battery: String, charger: String },
    /// Largest bath inverse temperature a battery with ground population p0 activates.
    BathBound {
        p0: String,
        #[arg(long, default_value_t = 1.0)]
        gap: f64,
    },
    /// Thermo-majorization curve of a state.
    Lorenz {
        state: String,
        #[arg(long)]
        beta: f64,
    },
    /// Optimal unrestricted discharging of the battery.
    Discharge { battery: String, discharger: String },
    /// Figure data as CSV.
    #[command(subcommand)]
    Fig(Figure),
}

#[derive(Subcommand)]
enum Figure {
    /// Entropy pollution over the three-level passive triangle.
    Pollution {
        #[command(flatten)]
        battery: BatteryArg,
        #[arg(long, default_value_t = 50)]
        grid: usize,
    },
    /// Charging amount against charger entropy at fixed charger energy.
    Capacity {
        #[command(flatten)]
        battery: BatteryArg,
        #[arg(long)]
        energy: f64,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, env = "PBL_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Thermo-majorization curves of the battery and the maximally mixed qubit.
    Lorenz {
        #[command(flatten)]
        battery: BatteryArg,
        #[arg(long)]
        beta: f64,
    },
}

#[derive(Args)]
struct BatteryArg {
    #[arg(long)]
    battery: String,
}

enum Failure {
    Malformed(String),
    Library(passive_battery::Error),
}

impl From<Malformed> for Failure {
    fn from(m: Malformed) -> Self {
        Failure::Malformed(m.0)
    }
}

impl From<passive_battery::Error> for Failure {
    fn from(e: passive_battery::Error) -> Self {
        Failure::Library(e)
    }
}

enum Output {
    Verdict(Map<String, Value>),
    Table(String),
}

type Outcome = Result<Output, Failure>;

fn verdict(value: Value) -> Outcome {
    match value {
        Value::Object(map) => Ok(Output::Verdict(map)),
        _ => unreachable!("verdicts are objects"),
    }
}

fn unit_battery(text: &str) -> Result<QubitBattery<f64>, Malformed> {
    input::battery(text, 1.0)
}

fn beta_value(beta: InverseTemperature<f64>) -> Value {
    num(beta.to_f64())
}

fn battery_json(b: &QubitBattery<f64>) -> Value {
    json!({"p0": num(b.p0()), "p1": num(b.p1())})
}

fn passivity(text: &str) -> Outcome {
    let s = input::state(text)?;
    let mut out = Map::new();
    out.insert("state".into(), nums(s.probs()));
    if let Some(w) = detect_active(&s) {
        out.insert("verdict".into(), json!("active"));
        out.insert("witness".into(), json!(w.to_string()));
        out.insert("value".into(), num(evaluate_witness(&w, &s)?));
    } else if let Some(beta) = gibbs_parameter(&s) {
        out.insert("verdict".into(), json!("gibbs"));
        out.insert("beta".into(), beta_value(beta));
    } else {
        out.insert("verdict".into(), json!("passive"));
        let mut witnesses = Map::new();
        for w in facet_witnesses::<f64>(s.dim())? {
            witnesses.insert(w.to_string(), num(evaluate_witness(&w, &s)?));
        }
        out.insert("witnesses".into(), Value::Object(witnesses));
    }
    verdict(Value::Object(out))
}

fn vertices(d: usize) -> Outcome {
    let set = polytope_vertices::<f64>(d)?;
    let vs: Vec<Value> = set.vertices().iter().map(|v| nums(v)).collect();
    verdict(json!({"d": d, "vertices": vs}))
}

fn decompose(text: &str) -> Outcome {
    let s = input::state(text)?;
    verdict(json!({
        "state": nums(s.probs()),
        "weights": nums(&vertex_decomposition(&s)?),
        "on_boundary": on_boundary(&s)?,
    }))
}

fn charge(battery: &str, charger: &str, oracle: bool) -> Outcome {
    let b = unit_battery(battery)?;
    let c = input::state(charger)?;
    let result = optimal_charge(&b, &c);
    let mut out = json!({
        "battery": battery_json(&b),
        "charger": nums(c.probs()),
        "charging_possible": charging_possible(&b, &c)?,
        "delta": num(result.delta),
        "final": battery_json(&result.final_battery),
        "energy_gain": num(result.energy_gain()),
        "swapped_pairs": result.swapped_pairs,
    });
    if oracle {
        let brute = brute_force_charge(&b, &c)?;
        out["oracle_delta"] = num(brute.delta);
        out["oracle_agrees"] = json!((brute.delta - result.delta).abs() <= 1e-12);
    }
    verdict(out)
}

fn mincopies(battery: &str, charger: &str, n_max: usize) -> Outcome {
    let b = unit_battery(battery)?;
    let c = input::state(charger)?;
    let search = min_copies_to_charge(&b, &c, n_max)?;
    let (result, copies) = match search {
        CopySearch::Found(n) => ("found", json!(n)),
        CopySearch::Never => ("never", Value::Null),
        CopySearch::NotFoundWithinBudget { .. } => ("not_found", Value::Null),
    };
    verdict(json!({"result": result, "copies": copies, "nmax": n_max}))
}

fn activate(battery: &str, charger: &str) -> Outcome {
    let b = unit_battery(battery)?;
    let c = input::state(charger)?;
    let mut out = json!({
        "activates": activates(&b, &c),
        "max_excited_population": num(max_excited_population(&b, &c)),
    });
    if c.dim() == 3 {
        let v = activation_condition_3d(&b, &c)?;
        out["branches"] = json!({
            "i": v.branch_i,
            "ii": v.branch_ii,
            "both": v.branch_both,
            "formula_max": v.formula_max.map_or(Value::Null, num),
        });
    }
    verdict(out)
}

fn bath_bound(p0: &str, gap: f64) -> Outcome {
    let p0 = input::scalar(p0)?;
    if !(0.0..=1.0).contains(&p0) {
        return Err(Failure::Malformed(format!("p0 = {p0} is not a probability")));
    }
    let b = QubitBattery::with_gap(p0, 1.0 - p0, gap)?;
    verdict(json!({"p0": num(p0), "gap": num(gap), "beta_max": num(bath_activation_bound(&b)?)}))
}

fn lorenz(text: &str, beta: f64) -> Outcome {
    let s = input::state(text)?;
    let curve = thermo_majorization_curve(&s, beta)?;
    let points: Vec<Value> = curve.points().iter().map(|&(x, y)| json!([num(x), num(y)])).collect();
    verdict(json!({"beta": num(beta), "points": points, "order": curve.order()}))
}

fn discharge(battery: &str, discharger: &str) -> Outcome {
    let b = unit_battery(battery)?;
    let q = input::state(discharger)?;
    let result = optimal_discharge(&b, &q)?;
    verdict(json!({
        "battery": battery_json(&b),
        "discharger": nums(q.probs()),
        "discharging_possible": discharging_possible(&b, &q)?,
        "final": battery_json(&result.final_battery),
        "shift_index": result.shift_index,
        "energy_drop": num(result.energy_drop),
    }))
}

fn figure(fig: &Figure) -> Outcome {
    let table = match fig {
        Figure::Pollution { battery, grid } => {
            let b = unit_battery(&battery.battery)?;
            let header = [
                "a1",
                "a2",
                "a3",
                "q0",
                "q1",
                "q2",
                "delta_entropy",
                "delta_energy",
                "pollution",
            ];
            let rows: Vec<Vec<String>> = pollution_grid(&b, *grid)?
                .iter()
                .map(|p| {
                    p.weights
                        .iter()
                        .chain(&p.charger)
                        .chain([&p.delta_entropy, &p.delta_energy, &p.pollution])
                        .map(|&x| cell(x))
                        .collect()
                })
                .collect();
            output::table(&header.map(String::from), &rows)
        }
        Figure::Capacity {
            battery,
            energy,
            n,
            d,
            seed,
        } => {
            let b = unit_battery(&battery.battery)?;
            let mut header: Vec<String> = (0..*d).map(|i| format!("q{i}")).collect();
            header.extend(["entropy", "energy", "delta"].map(String::from));
            let rows: Vec<Vec<String>> = capacity_samples(&b, *energy, *n, *d, *seed)?
                .iter()
                .map(|s| {
                    s.charger
                        .iter()
                        .chain([&s.entropy, &s.energy, &s.delta])
                        .map(|&x| cell(x))
                        .collect()
                })
                .collect();
            output::table(&header, &rows)
        }
        Figure::Lorenz { battery, beta } => {
            let b = unit_battery(&battery.battery)?;
            let rows: Vec<Vec<String>> = lorenz_data(&b, *beta)?
                .into_iter()
                .map(|(curve, x, y)| vec![curve.label().to_string(), cell(x), cell(y)])
                .collect();
            output::table(&["curve", "x", "y"].map(String::from), &rows)
        }
    };
    Ok(Output::Table(table))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Passivity { state } => passivity(state),
        Command::Vertices { d } => vertices(*d),
        Command::Decompose { state } => decompose(state),
        Command::Charge {
            battery,
            charger,
            oracle,
        } => charge(battery, charger, *oracle),
        Command::Mincopies { battery, charger, nmax } => mincopies(battery, charger, *nmax),
        Command::Activate { battery, charger } => activate(battery, charger),
        Command::BathBound { p0, gap } => bath_bound(p0, *gap),
        Command::Lorenz { state, beta } => lorenz(state, *beta),
        Command::Discharge { battery, discharger } => discharge(battery, discharger),
        Command::Fig(fig) => figure(fig),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Output::Verdict(map)) if cli.csv => print!("{}", output::field_value_csv(&map)),
        Ok(Output::Verdict(map)) => println!("{}", Value::Object(map)),
        Ok(Output::Table(table)) => print!("{table}"),
        Err(Failure::Malformed(msg)) => {
            eprintln!("error: malformed input: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_malformed_input() { 2 } else { 3 });
        }
    }
    ExitCode::SUCCESS
}
