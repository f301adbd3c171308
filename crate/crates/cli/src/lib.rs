//! Verification command-line front end for `greenball`.

pub mod config;
pub mod report;
pub mod suites;

use std::collections::BTreeMap;
use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;

use config::Config;
use report::{Row, VerificationReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot write report: {0}")]
    Output(String),
    #[error("computation rejected its inputs: {0}")]
    Compute(#[from] greenball::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Kernels,
    Representation,
    Gradient,
    LemmaLim,
    Averaging,
    Recovery,
    Appendix,
    AlmostPeriod,
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Kernels => "kernels",
            Command::Representation => "representation",
            Command::Gradient => "gradient",
            Command::LemmaLim => "lemma-lim",
            Command::Averaging => "averaging",
            Command::Recovery => "recovery",
            Command::Appendix => "appendix",
            Command::AlmostPeriod => "almost-period",
            Command::All => "all",
        }
    }

    const SUITES: [Command; 8] = [
        Command::Kernels,
        Command::Representation,
        Command::Gradient,
        Command::LemmaLim,
        Command::Averaging,
        Command::Recovery,
        Command::Appendix,
        Command::AlmostPeriod,
    ];
}

fn param<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).unwrap_or(serde_json::Value::Null)
}

fn section(command: Command, cfg: &Config) -> serde_json::Value {
    match command {
        Command::Kernels => param(&cfg.kernels),
        Command::Representation => param(&cfg.representation),
        Command::Gradient => param(&cfg.gradient),
        Command::LemmaLim => param(&cfg.lemma_lim),
        Command::Averaging => param(&cfg.averaging),
        Command::Recovery => param(&cfg.recovery),
        Command::Appendix => param(&cfg.appendix),
        Command::AlmostPeriod => param(&cfg.almost_period),
        Command::All => serde_json::Value::Null,
    }
}

fn rows(command: Command, cfg: &Config) -> greenball::Result<Vec<Row>> {
    match command {
        Command::Kernels => suites::kernels(cfg),
        Command::Representation => suites::representation(cfg),
        Command::Gradient => suites::gradient(cfg),
        Command::LemmaLim => suites::lemma_lim(cfg),
        Command::Averaging => suites::averaging(cfg),
        Command::Recovery => suites::recovery(cfg),
        Command::Appendix => suites::appendix(cfg),
        Command::AlmostPeriod => suites::almost_period(cfg),
        Command::All => {
            let mut all = Vec::new();
            for c in Command::SUITES {
                all.extend(rows(c, cfg)?);
            }
            Ok(all)
        }
    }
}

pub fn run(command: Command, cfg: &Config) -> Result<VerificationReport, CliError> {
    let start = Instant::now();
    let mut parameters = BTreeMap::new();
    parameters.insert("seed".to_string(), param(&cfg.seed));
    let sections: Vec<Command> = if command == Command::All { Command::SUITES.to_vec() } else { vec![command] };
    for c in sections {
        parameters.insert(c.name().to_string(), section(c, cfg));
    }
    let rows = rows(command, cfg)?;
    Ok(VerificationReport::new(command.name(), parameters, rows, start.elapsed().as_millis() as u64))
}
