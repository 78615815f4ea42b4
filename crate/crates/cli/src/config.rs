use std::path::PathBuf;
use std::sync::Arc;

use clap::ValueEnum;
use gmdisc::exactnum::{Backend, NumberField};
use gmdisc::gmengine::StepBudget;

use crate::literal::{parse_field, ScalarContext};
use crate::{CliError, GlobalArgs, RunArgs};

pub const MIN_PRECISION: u32 = 8;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub backend: Backend,
    pub max_precision: u32,
    pub budget_constant: u32,
    pub max_steps: Option<u64>,
    pub format: OutputFormat,
    pub render_dir: Option<PathBuf>,
    pub field: Option<Arc<NumberField>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            backend: Backend::Rational,
            max_precision: gmdisc::exactnum::DEFAULT_MAX_PRECISION,
            budget_constant: gmdisc::gmengine::DEFAULT_BUDGET_CONSTANT,
            max_steps: None,
            format: OutputFormat::Text,
            render_dir: None,
            field: None,
        }
    }
}

impl RunConfig {
    pub fn from_args(global: &GlobalArgs, run: Option<&RunArgs>) -> Result<RunConfig, CliError> {
        let backend: Backend = global.backend.parse().map_err(CliError::Config)?;
        let field = global.field.as_deref().map(parse_field).transpose()?;
        if field.is_some() && backend != Backend::Algebraic {
            return Err(CliError::Config("--field needs --backend algebraic".into()));
        }
        let mut cfg = RunConfig {
            backend,
            max_precision: global.max_precision,
            format: global.format,
            field,
            ..RunConfig::default()
        };
        if let Some(r) = run {
            cfg.budget_constant = r.budget_constant;
            cfg.max_steps = r.max_steps;
            cfg.render_dir = r.render_dir.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.max_precision < MIN_PRECISION {
            return Err(CliError::Config(format!(
                "--max-precision must be at least {MIN_PRECISION}, got {}",
                self.max_precision
            )));
        }
        if self.budget_constant < 1 {
            return Err(CliError::Config("--budget-constant must be at least 1".into()));
        }
        Ok(())
    }

    pub fn budget(&self) -> StepBudget {
        match self.max_steps {
            Some(n) => StepBudget::Fixed(n),
            None => StepBudget::Proportional(self.budget_constant),
        }
    }

    pub fn scalars(&self) -> ScalarContext {
        ScalarContext::new(self.backend, self.max_precision, self.field.clone())
    }
}
