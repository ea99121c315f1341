use num_traits::ToPrimitive;
use serde_json::{json, Value};

use icg_core::energy::{
    classify_energeticity, complete_graph_energy, emax_closed, emin_closed, energy_general,
    energy_prime_power, koolen_moulton_check, spectrum_gcd_graph,
};
use icg_core::model::{
    divisor_set_of, exponents_of, parse_list, DeltaVector, DivisorSet, ExponentTuple,
};
use icg_core::number_theory::{is_prime, prime_power_decomposition};
use icg_core::search::{brute_force_emax_prime_power, verify_theorem};
use icg_core::transform::{normalize, replay, RuleInstance, TransformStep};
use icg_core::{Natural, PrimePowerOrder};

use crate::output::{OutputRecord, Table};
use crate::{EmaxArgs, EnergyArgs, Failure, MethodArg, OrderArgs, SetArgs, TraceArgs, VerifyArgs};

fn strings<T: ToString>(items: &[T]) -> Value {
    Value::Array(items.iter().map(|x| Value::String(x.to_string())).collect())
}

fn order_of(a: &OrderArgs) -> Result<PrimePowerOrder, Failure> {
    Ok(PrimePowerOrder::new(a.p.clone(), a.s)?)
}

fn divisor_set(n: &Natural, text: &str) -> Result<DivisorSet, Failure> {
    let elements: Vec<Natural> = parse_list(text)?;
    Ok(DivisorSet::new(n.clone(), elements)?)
}

/// Prime-power view of `n`, if it is one.
fn as_prime_power(n: &Natural) -> Result<Option<PrimePowerOrder>, Failure> {
    match prime_power_decomposition(n)? {
        Some((p, s)) => Ok(Some(PrimePowerOrder::new(p, s)?)),
        None => Ok(None),
    }
}

pub fn energy(a: &EnergyArgs) -> Result<OutputRecord, Failure> {
    let mut rec = OutputRecord::new("energy");
    let (set, order, tuple) = match (&a.p, a.s, &a.exponents, &a.n, &a.divisors) {
        (Some(p), Some(s), Some(exps), None, None) => {
            let order = PrimePowerOrder::new(p.clone(), s)?;
            let tuple = ExponentTuple::new(parse_list(exps)?, s)?;
            rec.input("p", p.to_string())
                .input("s", s)
                .input("exponents", tuple.to_string());
            (divisor_set_of(&tuple, &order)?, Some(order), Some(tuple))
        }
        (None, None, None, Some(n), Some(divs)) => {
            let set = divisor_set(n, divs)?;
            rec.input("n", n.to_string())
                .input("divisors", set.to_string());
            let order = as_prime_power(n)?;
            let tuple = order.as_ref().map(|o| exponents_of(&set, o)).transpose()?;
            (set, order, tuple)
        }
        _ => {
            return Err(Failure::Usage(
                "give either --p, --s and --exponents or --n and --divisors".into(),
            ))
        }
    };
    let method = a.method.unwrap_or(if order.is_some() {
        MethodArg::Formula
    } else {
        MethodArg::Spectral
    });
    rec.input(
        "method",
        match method {
            MethodArg::Formula => "formula",
            MethodArg::Spectral => "spectral",
            MethodArg::Both => "both",
        },
    );

    let formula = || -> Result<Natural, Failure> {
        match (&order, &tuple) {
            (Some(o), Some(t)) => Ok(energy_prime_power(o, t)?),
            _ => Err(Failure::Usage(format!(
                "formula needs a prime-power order, got n = {}",
                set.n()
            ))),
        }
    };
    let spectral = || -> Result<Natural, Failure> { Ok(energy_general(set.n(), &set)?) };

    rec.result("n", set.n()).result("divisors", &set);
    if let Some(t) = &tuple {
        rec.result("exponents", t);
    }
    match method {
        MethodArg::Formula => {
            rec.result("energy", formula()?);
        }
        MethodArg::Spectral => {
            rec.result("energy", spectral()?);
        }
        MethodArg::Both => {
            let f = formula()?;
            let s = spectral()?;
            let agree = f == s;
            rec.result("energy", &f)
                .result("energy_formula", &f)
                .result("energy_spectral", &s)
                .flag("agreement", agree);
            if !agree {
                return Err(Failure::Discrepancy(Box::new(rec)));
            }
        }
    }
    Ok(rec)
}

pub fn emax(a: &EmaxArgs) -> Result<OutputRecord, Failure> {
    let order = order_of(&a.order)?;
    let mut rec = OutputRecord::new("emax");
    rec.input("p", order.p().to_string())
        .input("s", order.s())
        .input("brute", a.brute);

    let closed = emax_closed(&order)?;
    let sets = closed
        .maximizers
        .iter()
        .map(|t| divisor_set_of(t, &order))
        .collect::<Result<Vec<_>, _>>()?;
    rec.result("order", &order).result("emax", &closed.value);
    rec.result_value("maximizer_tuples", strings(&closed.maximizers))
        .result_value("maximizer_sets", strings(&sets));

    let mut table = Table::new(&["tuple", "delta", "divisors"]);
    for (t, set) in closed.maximizers.iter().zip(&sets) {
        let delta = if t.is_admissible() && t.len() >= 2 {
            icg_core::AdmissibleTuple::try_from(t.clone())?
                .delta()
                .to_string()
        } else {
            "-".to_string()
        };
        table.push(vec![t.to_string(), delta, set.to_string()]);
    }
    rec.table = table;

    if a.brute {
        let brute = brute_force_emax_prime_power(&order)?;
        let mut expected = sets.clone();
        expected.sort_by(|x, y| x.elements().cmp(y.elements()));
        let agree = brute.emax == closed.value && brute.maximizers == expected;
        rec.result("brute_emax", &brute.emax)
            .result("examined", brute.examined)
            .result_value("brute_maximizers", strings(&brute.maximizers))
            .flag("agreement", agree);
        if !agree {
            return Err(Failure::Discrepancy(Box::new(rec)));
        }
    }
    Ok(rec)
}

pub fn emin(a: &OrderArgs) -> Result<OutputRecord, Failure> {
    let order = order_of(a)?;
    let (value, sets) = emin_closed(&order)?;
    let mut rec = OutputRecord::new("emin");
    rec.input("p", order.p().to_string()).input("s", order.s());
    rec.result("order", &order).result("emin", &value);
    rec.result_value("minimizer_sets", strings(&sets));
    let mut table = Table::new(&["divisors"]);
    for set in &sets {
        table.push(vec![set.to_string()]);
    }
    rec.table = table;
    Ok(rec)
}

fn step_label(step: &TransformStep) -> String {
    let rule = step.rule();
    if rule.mirrored {
        format!("~{}", rule.label)
    } else {
        rule.label.to_string()
    }
}

pub fn trace(a: &TraceArgs) -> Result<OutputRecord, Failure> {
    let order = order_of(&a.order)?;
    let d0 = DeltaVector::new(parse_list(&a.delta)?, order.s())?;
    let mut rec = OutputRecord::new("trace");
    rec.input("p", order.p().to_string())
        .input("s", order.s())
        .input("delta", d0.to_string());

    let trace = match &a.steps {
        Some(text) => {
            let rules = text
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(str::parse::<RuleInstance>)
                .collect::<Result<Vec<_>, _>>()?;
            rec.input("steps", strings(&rules));
            replay(&d0, &order, &rules)?
        }
        None => normalize(&d0, &order)?,
    };
    let emax = emax_closed(&order)?.value;

    rec.result("order", &order)
        .result("initial", &trace.initial)
        .result("terminal", &trace.terminal)
        .result("terminal_energy", trace.terminal_energy())
        .result("steps", trace.steps.len())
        .result("emax", &emax)
        .flag("reaches_emax", *trace.terminal_energy() == emax);

    let mut rows = vec![json!({
        "step": 0,
        "label": Value::Null,
        "u": Value::Null,
        "v": Value::Null,
        "before": Value::Null,
        "after": trace.initial.to_string(),
        "r": trace.initial.r(),
        "energy": trace.initial_energy.to_string(),
    })];
    let mut table = Table::new(&["l", "d", "r", "energy", "next"]);
    let mut csv = Table::new(&["step", "label", "u", "v", "before", "after", "r", "energy"]);
    csv.push(vec![
        "0".into(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        trace.initial.to_string(),
        trace.initial.r().to_string(),
        trace.initial_energy.to_string(),
    ]);
    let describe = |s: &TransformStep| match s.v {
        Some(v) => format!("{}({},{})", step_label(s), s.u, v),
        None => format!("{}({})", step_label(s), s.u),
    };
    let mut prev = (trace.initial.clone(), trace.initial_energy.clone());
    for (i, step) in trace.steps.iter().enumerate() {
        table.push(vec![
            i.to_string(),
            prev.0.to_string(),
            prev.0.r().to_string(),
            prev.1.to_string(),
            describe(step),
        ]);
        prev = (step.after.clone(), step.energy_after.clone());
        rows.push(json!({
            "step": i + 1,
            "label": step_label(step),
            "u": step.u,
            "v": step.v,
            "before": step.before.to_string(),
            "after": step.after.to_string(),
            "r": step.after.r(),
            "energy": step.energy_after.to_string(),
        }));
        csv.push(vec![
            (i + 1).to_string(),
            step_label(step),
            step.u.to_string(),
            step.v.map(|v| v.to_string()).unwrap_or_default(),
            step.before.to_string(),
            step.after.to_string(),
            step.after.r().to_string(),
            step.energy_after.to_string(),
        ]);
    }
    table.push(vec![
        trace.steps.len().to_string(),
        prev.0.to_string(),
        prev.0.r().to_string(),
        prev.1.to_string(),
        String::new(),
    ]);
    rec.result_value("rows", Value::Array(rows));
    rec.table = table;
    rec.csv = Some(csv);
    Ok(rec)
}

pub fn classify(a: &SetArgs) -> Result<OutputRecord, Failure> {
    let set = divisor_set(&a.n, &a.divisors)?;
    let (report, class) = classify_energeticity(&set)?;
    let mut rec = OutputRecord::new("classify");
    rec.input("n", a.n.to_string())
        .input("divisors", set.to_string());
    rec.result("n", &report.n)
        .result("divisors", &set)
        .result("energy", &report.energy)
        .result("method", report.method)
        .result("complete_graph_energy", complete_graph_energy(&report.n))
        .result("classification", class)
        .flag(
            "koolen_moulton",
            koolen_moulton_check(&report.n, &report.energy),
        );
    Ok(rec)
}

pub fn spectrum(a: &SetArgs) -> Result<OutputRecord, Failure> {
    let set = divisor_set(&a.n, &a.divisors)?;
    let spec = spectrum_gcd_graph(&a.n, &set)?;
    let mut rec = OutputRecord::new("spectrum");
    rec.input("n", a.n.to_string())
        .input("divisors", set.to_string());
    rec.result("n", &a.n)
        .result("divisors", &set)
        .result("energy", spec.energy());
    rec.result_value("eigenvalues", strings(&spec.eigenvalues));
    let mut table = Table::new(&["k", "eigenvalue"]);
    for (k, l) in spec.eigenvalues.iter().enumerate() {
        table.push(vec![k.to_string(), l.to_string()]);
    }
    rec.table = table;
    Ok(rec)
}

pub fn verify(a: &VerifyArgs) -> Result<OutputRecord, Failure> {
    let mut rec = OutputRecord::new("verify");
    rec.input("pmax", a.pmax).input("smax", a.smax);
    let mut primes = Vec::new();
    for p in 2..=a.pmax {
        if is_prime(&p)? {
            primes.push(p);
        }
    }
    let mut table = Table::new(&["order", "emax", "brute_emax", "maximizers", "ok"]);
    let mut discrepancies = Vec::new();
    let mut checked = 0u64;
    for &p in &primes {
        for s in 1..=a.smax {
            let check = verify_theorem(&PrimePowerOrder::new(p, s)?)?;
            table.push(vec![
                check.order.to_string(),
                check.closed.value.to_string(),
                check.brute.emax.to_string(),
                check
                    .brute
                    .maximizers
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
                check.ok().to_string(),
            ]);
            discrepancies.extend(check.discrepancies);
            checked += 1;
        }
    }
    let all_pass = discrepancies.is_empty();
    rec.result("orders_checked", checked)
        .result("primes", primes.len().to_u64().unwrap_or(0))
        .flag("all_pass", all_pass);
    rec.result_value("discrepancies", strings(&discrepancies));
    rec.table = table;
    if all_pass {
        Ok(rec)
    } else {
        Err(Failure::Discrepancy(Box::new(rec)))
    }
}
