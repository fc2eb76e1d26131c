//! Scanners over generated families.
//!
//! The summand scan decomposes `𝔎²(M)/ℑ²𝔎²(M)` and `𝔎²(M/ℑ²M)` and checks
//! that every summand of Loewy length three has zero `F_1`. The comparison
//! scan probes whether `𝔎^n(M)/ℑ^m𝔎^n(M)` and `𝔎^n(M/ℑ^m M)` are isomorphic.

use cjt_core::decomp::{decompose, iso_probe, IsoVerdict};
use cjt_core::lattice::{kernel_mod_image, kernel_of_quotient};
use cjt_core::sheaf::{bundle_splitting, sheaf_is_zero};
use cjt_core::{KEModule, Result};

use crate::family::{member, Family, FamilyConfig, Member};
use crate::format::ModuleFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// `𝔎²(M)/ℑ²𝔎²(M)`
    KernelModImage,
    /// `𝔎²(M/ℑ²M)`
    KernelOfQuotient,
}

impl Construction {
    pub fn tag(self) -> &'static str {
        match self {
            Construction::KernelModImage => "K2/I2K2",
            Construction::KernelOfQuotient => "K2(M/I2)",
        }
    }

    pub fn build(self, m: &KEModule) -> Result<KEModule> {
        match self {
            Construction::KernelModImage => kernel_mod_image(m, 2, 2),
            Construction::KernelOfQuotient => kernel_of_quotient(m, 2, 2),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub member_index: usize,
    pub recipe: String,
    pub construction: Construction,
    pub module: ModuleFile,
    pub summand: ModuleFile,
    /// Twists of `F_1` of the summand when it is locally free.
    pub f1: String,
    /// No endomorphism split the summand within the round budget.
    pub probably_indecomposable: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ConjectureReport {
    pub modules: usize,
    pub constructions: usize,
    pub summands: usize,
    pub loewy_three: usize,
    pub counterexamples: Vec<Counterexample>,
    /// Summand dimensions per construction, in scan order.
    pub records: Vec<String>,
}

pub struct ScanOptions {
    pub family: Family,
    pub count: usize,
    pub seed: u64,
    pub rounds: usize,
    pub config: FamilyConfig,
}

fn scan_member(mem: &Member, rounds: usize, seed: u64, rep: &mut ConjectureReport) -> Result<()> {
    let m = &mem.module;
    rep.modules += 1;
    for c in [Construction::KernelModImage, Construction::KernelOfQuotient] {
        let n = c.build(m)?;
        rep.constructions += 1;
        let dec = decompose(&n, seed ^ mem.index as u64, rounds)?;
        let mut dims = Vec::new();
        for s in &dec.summands {
            rep.summands += 1;
            let ll = s.module.loewy_length();
            dims.push(format!("{}(LL{ll})", s.module.dim()));
            if ll != 3 {
                continue;
            }
            rep.loewy_three += 1;
            if !sheaf_is_zero(&s.module, 1)? {
                let f1 = bundle_splitting(&s.module, 1).map(|st| st.to_string()).unwrap_or_else(|e| e.to_string());
                rep.counterexamples.push(Counterexample {
                    member_index: mem.index,
                    recipe: mem.name.clone(),
                    construction: c,
                    module: ModuleFile::from_module(m, Some(mem.name.clone())),
                    summand: ModuleFile::from_module(&s.module, None),
                    f1,
                    probably_indecomposable: s.probably_indecomposable,
                });
            }
        }
        rep.records.push(format!("#{} {} {}: [{}]", mem.index, mem.name, c.tag(), dims.join(", ")));
    }
    Ok(())
}

pub fn conjecture_scan(opts: &ScanOptions) -> Result<ConjectureReport> {
    let mut rep = ConjectureReport::default();
    for i in 0..opts.count {
        let mem = member(opts.family, opts.seed, i, &opts.config)?;
        scan_member(&mem, opts.rounds, opts.seed, &mut rep)?;
    }
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct QuestionRecord {
    pub member_index: usize,
    pub recipe: String,
    pub n: usize,
    pub m: usize,
    pub dims: (usize, usize),
    pub verdict: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct QuestionReport {
    pub records: Vec<QuestionRecord>,
    pub isomorphic: usize,
    pub not_isomorphic: usize,
    pub unknown: usize,
}

pub fn question_scan(opts: &ScanOptions) -> Result<QuestionReport> {
    let mut rep = QuestionReport::default();
    for i in 0..opts.count {
        let mem = member(opts.family, opts.seed, i, &opts.config)?;
        let p = mem.module.p() as usize;
        for n in 1..=p {
            for l in 1..=p {
                let a = kernel_mod_image(&mem.module, n, l)?;
                let b = kernel_of_quotient(&mem.module, n, l)?;
                let verdict = iso_probe(&a, &b, opts.seed ^ i as u64, opts.rounds)?;
                let detail = match &verdict {
                    IsoVerdict::Isomorphic(_) => {
                        rep.isomorphic += 1;
                        String::new()
                    }
                    IsoVerdict::NotIsomorphic(why) => {
                        rep.not_isomorphic += 1;
                        why.clone()
                    }
                    IsoVerdict::Unknown => {
                        rep.unknown += 1;
                        String::new()
                    }
                };
                rep.records.push(QuestionRecord {
                    member_index: i,
                    recipe: mem.name.clone(),
                    n,
                    m: l,
                    dims: (a.dim(), b.dim()),
                    verdict: verdict.tag(),
                    detail,
                });
            }
        }
    }
    Ok(rep)
}
