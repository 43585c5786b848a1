//! Text serialisation of problem instances.
//!
//! ```text
//! <problem> <n> <m|-> <seed>
//! <whitespace-separated integer payload>
//! ```
//!
//! Payloads: `linear` weights; `subsetsum` weights then target; `knapsack`
//! weights, profits, capacity; `setcover` the `m` membership rows; `cocz`
//! nothing. Each group sits on its own line.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{CoczInstance, KnapsackInstance, LinearInstance, SetCoverInstance, SubsetSumInstance};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Linear(LinearInstance),
    SubsetSum(SubsetSumInstance),
    Knapsack(KnapsackInstance),
    SetCover(SetCoverInstance),
    Cocz(CoczInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Linear(_) => "linear",
            Instance::SubsetSum(_) => "subsetsum",
            Instance::Knapsack(_) => "knapsack",
            Instance::SetCover(_) => "setcover",
            Instance::Cocz(_) => "cocz",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Instance::Linear(i) => i.len(),
            Instance::SubsetSum(i) => i.len(),
            Instance::Knapsack(i) => i.len(),
            Instance::SetCover(i) => i.n(),
            Instance::Cocz(i) => i.n(),
        }
    }

    pub fn m(&self) -> Option<usize> {
        match self {
            Instance::SetCover(i) => Some(i.m()),
            Instance::Cocz(i) => Some(i.m()),
            _ => None,
        }
    }
}

/// An instance together with the seed it was generated from.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub seed: u64,
}

fn join(values: &[i64]) -> String {
    values
        .iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

impl InstanceFile {
    pub fn to_text(&self) -> String {
        let inst = &self.instance;
        let m = inst.m().map_or_else(|| "-".to_string(), |m| m.to_string());
        let mut out = format!("{} {} {} {}\n", inst.kind(), inst.n(), m, self.seed);
        match inst {
            Instance::Linear(i) => {
                let _ = writeln!(out, "{}", join(i.weights()));
            }
            Instance::SubsetSum(i) => {
                let _ = writeln!(out, "{}", join(i.weights()));
                let _ = writeln!(out, "{}", i.target());
            }
            Instance::Knapsack(i) => {
                let _ = writeln!(out, "{}", join(i.weights()));
                let _ = writeln!(out, "{}", join(i.profits()));
                let _ = writeln!(out, "{}", i.capacity());
            }
            Instance::SetCover(i) => {
                for e in 0..i.m() {
                    let row: Vec<String> = i.row(e).iter().map(u8::to_string).collect();
                    let _ = writeln!(out, "{}", row.join(" "));
                }
            }
            Instance::Cocz(_) => {}
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse("line 1", "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::parse("line 1", "expected `problem n m seed`"));
        }
        let n: usize = parse_num(fields[1], "n")?;
        let m: Option<usize> = match fields[2] {
            "-" => None,
            s => Some(parse_num(s, "m")?),
        };
        let seed: u64 = parse_num(fields[3], "seed")?;
        let payload: Vec<i64> = lines
            .flat_map(str::split_whitespace)
            .map(|t| parse_num(t, "payload"))
            .collect::<Result<_>>()?;
        let expect = |len: usize| -> Result<()> {
            if payload.len() == len {
                Ok(())
            } else {
                Err(Error::parse(
                    "payload",
                    format!("expected {len} integers, found {}", payload.len()),
                ))
            }
        };
        let need_m = || m.ok_or_else(|| Error::parse("line 1", "this problem needs m"));
        let instance = match fields[0] {
            "linear" => {
                expect(n)?;
                Instance::Linear(LinearInstance::new(payload)?)
            }
            "subsetsum" => {
                expect(n + 1)?;
                Instance::SubsetSum(SubsetSumInstance::new(payload[..n].to_vec(), payload[n])?)
            }
            "knapsack" => {
                expect(2 * n + 1)?;
                Instance::Knapsack(KnapsackInstance::new(
                    payload[..n].to_vec(),
                    payload[n..2 * n].to_vec(),
                    payload[2 * n],
                )?)
            }
            "setcover" => {
                let m = need_m()?;
                expect(m * n)?;
                let membership = payload
                    .iter()
                    .map(|&a| u8::try_from(a).map_err(|_| Error::parse("payload", "bad entry")))
                    .collect::<Result<Vec<u8>>>()?;
                Instance::SetCover(SetCoverInstance::new(m, n, membership)?)
            }
            "cocz" => {
                expect(0)?;
                Instance::Cocz(CoczInstance::new(n, need_m()?)?)
            }
            other => {
                return Err(Error::Unknown {
                    kind: "problem",
                    name: other.to_string(),
                })
            }
        };
        if m.is_some() != instance.m().is_some() {
            return Err(Error::parse("line 1", "m must be `-` for this problem"));
        }
        Ok(Self { instance, seed })
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(what.to_string(), format!("`{s}` is not a valid number")))
}

pub fn write_instance(file: &InstanceFile, path: &Path) -> Result<()> {
    fs::write(path, file.to_text()).map_err(|e| Error::io(path, e))
}

pub fn read_instance(path: &Path) -> Result<InstanceFile> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    InstanceFile::parse(&text)
}
