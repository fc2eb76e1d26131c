//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use cjt_cli::family::{generate, random_invertible, random_w_quotient, Family, FamilyConfig, Member};
use cjt_cli::fixtures;
use cjt_cli::format::ModuleFile;
use cjt_cli::scan::{conjecture_scan, ScanOptions};
use cjt_cli::suites::{
    chern, coordinate_change, cyclic_restriction_ranks, duality, equal_images_reduction, generic_kernel_reduction,
    kernel_duality, power_reduction, Bundles, Check,
};
use cjt_core::decomp::{decompose, iso_probe, IsoVerdict, DEFAULT_ROUNDS};
use cjt_core::lattice::{equal_images_decide, generic_kernel_filtration, generic_kernel_power};
use cjt_core::sheaf::{sheaf_is_zero, splitting_type, SplittingType};
use cjt_core::{constant_jordan_type, generic_rank, jordan_type, CjtDecision, JordanType, KEModule, PointSpec};
use cjt_exact::FieldCtx;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PRIMES: [u32; 3] = [2, 3, 5];
const MAX_N: usize = 8;
const FAMILY_SEED: u64 = 20_240_611;
const FAMILY_SIZE: usize = 120;
const MIN_FAMILY: usize = 100;
const MAX_DIM: usize = 24;
const RESTRICTION_PAIRS: usize = 60;
const MIN_RESTRICTIONS: usize = 50;
const QUOTIENTS_PER_PRIME: usize = 12;
const SCAN_SIZE: usize = 200;
const SCAN_SEED: u64 = 2024;

type Outcome = Result<String, String>;

/// `[d]^{n-d+1}[d-1]...[1]`, written out as multiplicities `a_1..a_p`.
fn expected_w_jordan_type(n: usize, d: usize, p: usize) -> JordanType {
    let mut mult = vec![0; p];
    mult[d - 1] = n - d + 1;
    for j in 1..d {
        mult[j - 1] += 1;
    }
    JordanType::new(mult)
}

fn w_grid() -> Vec<(FieldCtx, usize, usize)> {
    let mut out = Vec::new();
    for p in PRIMES {
        let f = FieldCtx::prime(p).unwrap();
        for n in 1..=MAX_N {
            for d in 1..=n.min(p as usize) {
                out.push((f.clone(), n, d));
            }
        }
    }
    out
}

fn all_hold(checks: &[Check], what: &str) -> Result<usize, String> {
    match checks.iter().find(|c| !c.holds) {
        Some(c) => Err(format!("{what}: {} ({})", c.name, c.detail)),
        None => Ok(checks.len()),
    }
}

fn criterion1() -> Outcome {
    let mut count = 0;
    for (f, n, d) in w_grid() {
        let w = KEModule::w_module(&f, n, d).map_err(|e| e.to_string())?;
        let expected = expected_w_jordan_type(n, d, f.p() as usize);
        match constant_jordan_type(&w).map_err(|e| e.to_string())? {
            CjtDecision::Constant(jt) if jt == expected => count += 1,
            other => return Err(format!("W({n},{d}) over F_{}: {other:?}, expected {expected}", f.p())),
        }
    }
    Ok(format!("{count} W-modules"))
}

fn criterion2() -> Outcome {
    let mut count = 0;
    for (f, n, d) in w_grid() {
        let w = KEModule::w_module(&f, n, d).map_err(|e| e.to_string())?;
        for i in 1..=f.p() as usize {
            let expected = if i < d {
                SplittingType::new(vec![i as i64 - n as i64])
            } else if i == d {
                SplittingType::new(vec![0; n - d + 1])
            } else {
                SplittingType::zero()
            };
            let got = splitting_type(&w, i).map_err(|e| e.to_string())?;
            if got != expected {
                return Err(format!("F_{i}(W({n},{d})) over F_{} = {got}, expected {expected}", f.p()));
            }
            count += 1;
        }
    }
    Ok(format!("{count} splitting types"))
}

fn criterion3() -> Outcome {
    let mut count = 0;
    for p in PRIMES {
        let f = FieldCtx::prime(p).unwrap();
        for n in 2..=MAX_N {
            let d = KEModule::w_module(&f, n, 2).map_err(|e| e.to_string())?.dual();
            let got = splitting_type(&d, 1).map_err(|e| e.to_string())?;
            let expected = SplittingType::new(vec![n as i64 - 1]);
            if got != expected {
                return Err(format!("F_1(W({n},2)#) over F_{p} = {got}, expected {expected}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} duals"))
}

fn criterion4() -> Outcome {
    let m = fixtures::mainexample();
    let f1 = splitting_type(&m, 1).map_err(|e| e.to_string())?;
    if f1 != SplittingType::new(vec![-1, -1]) {
        return Err(format!("F_1 = {f1}"));
    }
    let f1d = splitting_type(&m.dual(), 1).map_err(|e| e.to_string())?;
    if f1d != SplittingType::new(vec![1, 1]) {
        return Err(format!("F_1 of the dual = {f1d}"));
    }
    let k2 = generic_kernel_power(&m, 2).map_err(|e| e.to_string())?.subspace;
    // Rank formula for the generic operator squared.
    let by_rank = m.dim() - generic_rank(&m, 2).map_err(|e| e.to_string())?;
    if k2.dim() != 6 || by_rank != 6 {
        return Err(format!("dim K^2 = {} (rank formula {by_rank}), expected 6", k2.dim()));
    }
    let sub = m.submodule(&k2).map_err(|e| e.to_string())?.module;
    let dec = decompose(&sub, 7, DEFAULT_ROUNDS).map_err(|e| e.to_string())?;
    if dec.summands.len() != 2 {
        return Err(format!("K^2 splits into {:?}", dec.dims()));
    }
    let w22 = KEModule::w_module(m.field(), 2, 2).map_err(|e| e.to_string())?;
    for (k, s) in dec.summands.iter().enumerate() {
        match iso_probe(&s.module, &w22, 11 + k as u64, DEFAULT_ROUNDS).map_err(|e| e.to_string())? {
            IsoVerdict::Isomorphic(_) => {}
            v => return Err(format!("summand {} vs W(2,2): {}", k + 1, v.tag())),
        }
    }
    Ok("F_1 = O(-1)^2, F_1(dual) = O(1)^2, K^2 = W(2,2) + W(2,2)".into())
}

fn criterion5() -> Outcome {
    let m = fixtures::sixteen();
    let expected = JordanType::new(vec![0, 2, 4]);
    match constant_jordan_type(&m).map_err(|e| e.to_string())? {
        CjtDecision::Constant(jt) if jt == expected => {}
        other => return Err(format!("Jordan type decision {other:?}")),
    }
    let filt = generic_kernel_filtration(&m).map_err(|e| e.to_string())?;
    let layer = |j: i32| filt.layers.iter().find(|l| l.index == j).map(|l| l.subspace.clone());
    let top = layer(-1).ok_or("no J^-1 K layer")?;
    let bottom = layer(2).ok_or("no J^2 K layer")?;
    if !top.is_full() || !bottom.is_zero() {
        return Err(format!("J^-1 K has dim {}, J^2 K has dim {}", top.dim(), bottom.dim()));
    }
    let k2 = generic_kernel_power(&m, 2).map_err(|e| e.to_string())?.subspace;
    if !(top.contains(&k2).map_err(|e| e.to_string())? && k2.dim() < top.dim()) {
        return Err(format!("K^2 has dim {} inside J^-1 K of dim {}", k2.dim(), top.dim()));
    }
    Ok(format!("Jordan type {expected}, K^2 of dim {} strictly inside J^-1 K", k2.dim()))
}

struct Suite {
    members: Vec<(Member, Bundles)>,
}

impl Suite {
    fn build() -> Result<Suite, String> {
        let cfg = FamilyConfig { max_dim: MAX_DIM, ..FamilyConfig::default() };
        let members = generate(Family::All, FAMILY_SIZE, FAMILY_SEED, &cfg).map_err(|e| e.to_string())?;
        let mut out = Vec::new();
        for mem in members {
            if mem.module.rank() != 2 || mem.module.dim() > MAX_DIM {
                return Err(format!("member #{} is outside the family bounds", mem.index));
            }
            let b = Bundles::compute(&mem.module).map_err(|e| format!("#{} {}: {e}", mem.index, mem.name))?;
            out.push((mem, b));
        }
        if out.len() < MIN_FAMILY {
            return Err(format!("only {} members", out.len()));
        }
        Ok(Suite { members: out })
    }

    fn run<F>(&self, what: &str, f: F) -> Outcome
    where
        F: Fn(&KEModule, &Bundles) -> cjt_core::Result<Vec<Check>>,
    {
        let mut total = 0;
        for (mem, b) in &self.members {
            let checks = f(&mem.module, b).map_err(|e| format!("#{} {}: {e}", mem.index, mem.name))?;
            total += all_hold(&checks, &format!("#{} {}", mem.index, mem.name))?;
        }
        Ok(format!("{total} {what} checks on {} modules", self.members.len()))
    }
}

fn criterion9(suite: &Suite) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(FAMILY_SEED ^ 9);
    let mut pairs = 0;
    let mut cyclic = 0;
    for (mem, b) in suite.members.iter().cycle().take(RESTRICTION_PAIRS) {
        let m = &mem.module;
        let a = random_invertible(m.field(), 2, &mut rng);
        all_hold(&coordinate_change(m, b, &a).map_err(|e| e.to_string())?, &mem.name)?;
        pairs += 1;
        let f = m.field();
        let point = loop {
            let pt = vec![f.random(&mut rng), f.random(&mut rng)];
            if pt.iter().any(|x| !x.is_zero()) {
                break pt;
            }
        };
        all_hold(&cyclic_restriction_ranks(m, b, &point).map_err(|e| e.to_string())?, &mem.name)?;
        cyclic += 1;
        // Bundle ranks against the generic Jordan type.
        let jt = jordan_type(m, &PointSpec::Generic).map_err(|e| e.to_string())?;
        for i in 1..=b.len() {
            if b.get(i).rank() != jt.multiplicity(i) {
                return Err(format!("#{}: rank F_{i} = {} but generic type {jt}", mem.index, b.get(i).rank()));
            }
        }
    }
    if pairs < MIN_RESTRICTIONS {
        return Err(format!("only {pairs} restrictions"));
    }
    Ok(format!("{pairs} coordinate changes, {cyclic} cyclic restrictions"))
}

fn criterion11() -> Outcome {
    let mut modules: Vec<(String, KEModule)> = Vec::new();
    for (f, n, d) in w_grid() {
        modules.push((format!("W({n},{d}) over F_{}", f.p()), KEModule::w_module(&f, n, d).unwrap()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(FAMILY_SEED ^ 11);
    let mut quotients = 0;
    for p in PRIMES {
        let f = FieldCtx::prime(p).unwrap();
        let mut found = 0;
        for _ in 0..QUOTIENTS_PER_PRIME * 20 {
            if found == QUOTIENTS_PER_PRIME {
                break;
            }
            if let Some((name, q)) = random_w_quotient(&f, &mut rng, MAX_DIM) {
                modules.push((format!("{name} over F_{p}"), q));
                found += 1;
            }
        }
        quotients += found;
    }
    let mut checks = 0;
    let mut skipped = 0;
    for (name, m) in &modules {
        if !equal_images_decide(m).map_err(|e| e.to_string())?.holds {
            return Err(format!("{name} does not have equal images"));
        }
        let (cs, sk) = equal_images_reduction(m).map_err(|e| format!("{name}: {e}"))?;
        checks += all_hold(&cs, name)?;
        skipped += sk;
    }
    Ok(format!(
        "{checks} checks on {} modules ({quotients} quotients), {skipped} non-locally-free indices skipped",
        modules.len()
    ))
}

fn criterion13() -> Outcome {
    let opts = ScanOptions {
        family: Family::All,
        count: SCAN_SIZE,
        seed: SCAN_SEED,
        rounds: DEFAULT_ROUNDS,
        config: FamilyConfig { max_dim: MAX_DIM, ..FamilyConfig::default() },
    };
    let rep = conjecture_scan(&opts).map_err(|e| e.to_string())?;
    if rep.modules != SCAN_SIZE {
        return Err(format!("scanned {} of {SCAN_SIZE}", rep.modules));
    }
    // Any reported candidate must survive a round trip through its files.
    for c in &rep.counterexamples {
        let m = ModuleFile::parse(&c.module.to_json()).and_then(|f| f.to_module()).map_err(|e| e.to_string())?;
        let s = ModuleFile::parse(&c.summand.to_json()).and_then(|f| f.to_module()).map_err(|e| e.to_string())?;
        if !constant_jordan_type(&m).map_err(|e| e.to_string())?.is_constant() {
            return Err(format!("candidate from #{} is not of constant Jordan type", c.member_index));
        }
        if s.loewy_length() != 3 || sheaf_is_zero(&s, 1).map_err(|e| e.to_string())? {
            return Err(format!("candidate from #{} does not reproduce", c.member_index));
        }
    }
    Ok(format!(
        "{} modules, {} summands, {} of Loewy length 3, {} with nonzero F_1",
        rep.modules,
        rep.summands,
        rep.loewy_three,
        rep.counterexamples.len()
    ))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    })
}

fn report(n: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let outcome = guarded(f);
    let secs = t.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("PASS {n:>2} {name}: {detail} [{secs:.1}s]");
            true
        }
        Err(why) => {
            println!("FAIL {n:>2} {name}: {why} [{secs:.1}s]");
            false
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results = vec![
        report(1, "W-module Jordan types", criterion1),
        report(2, "W-module bundles", criterion2),
        report(3, "dual line bundles", criterion3),
        report(4, "seven-dimensional fixture", criterion4),
        report(5, "sixteen-dimensional fixture", criterion5),
    ];

    let suite = catch_unwind(Suite::build).unwrap_or_else(|_| Err("panicked while generating".into()));
    let on_suite = |n: usize, name: &str, f: &dyn Fn(&Suite) -> Outcome| {
        report(n, name, || match &suite {
            Ok(s) => f(s),
            Err(e) => Err(format!("module family could not be built: {e}")),
        })
    };
    results.push(on_suite(6, "generic-kernel reduction", &|s| s.run("reduction", generic_kernel_reduction)));
    results.push(on_suite(7, "power reduction", &|s| s.run("power reduction", power_reduction)));
    results.push(on_suite(8, "duality", &|s| s.run("duality", duality)));
    results.push(on_suite(9, "coordinate change and cyclic restriction", &criterion9));
    results.push(on_suite(10, "Chern identity", &|s| s.run("Chern", |m, _| chern(m))));
    results.push(report(11, "equal-images reduction", criterion11));
    results.push(on_suite(12, "duality of kernels", &|s| s.run("kernel duality", |m, _| kernel_duality(m))));
    results.push(report(13, "summand scan", criterion13));

    let failures = results.iter().filter(|ok| !**ok).count();
    println!("{failures} failed, total {:.1}s", start.elapsed().as_secs_f64());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
