use std::fmt;
use std::fs;
use std::path::Path;

use localwave::random::rng;
use localwave::{FieldParams, FilterBank, FrameFilterSet, LocalField, StepFn};

use crate::{Exit, Global, RandomFrame};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Input(_) => Exit::Input,
            CliError::Numeric(_) => Exit::Numeric,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
        }
    }
}

impl From<localwave::Error> for CliError {
    fn from(e: localwave::Error) -> Self {
        match e {
            localwave::Error::Numeric(m) => CliError::Numeric(m),
            other => CliError::Input(other.to_string()),
        }
    }
}

pub fn input<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Input(msg.into()))
}

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: localwave::Result<T>) -> CliResult<T> {
    r.map_err(|e| match CliError::from(e) {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// `--field`, if given: a preset name or a JSON parameter file.
pub fn explicit_field(global: &Global) -> CliResult<Option<LocalField>> {
    let Some(spec) = &global.field else {
        return Ok(None);
    };
    let path = Path::new(spec);
    let field = if path.is_file() {
        let params: FieldParams = serde_json::from_str(&read(path)?)
            .map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
        with_path(path, LocalField::new(params))?
    } else {
        LocalField::preset(spec)?
    };
    Ok(Some(field))
}

/// `--field`, falling back to `q2`.
pub fn field_or_default(global: &Global) -> CliResult<LocalField> {
    Ok(match explicit_field(global)? {
        Some(f) => f,
        None => LocalField::preset("q2")?,
    })
}

/// Fails when `--field` names a different field than an input file.
pub fn agree(global: &Global, field: &LocalField, what: &str) -> CliResult<()> {
    if let Some(f) = explicit_field(global)? {
        if &f != field {
            return input(format!(
                "--field {:?} does not match the field of {what} {:?}",
                f.params(),
                field.params()
            ));
        }
    }
    Ok(())
}

pub fn load_bank(spec: &str, global: &Global) -> CliResult<FilterBank> {
    if spec == "haar" {
        return Ok(FilterBank::haar(&field_or_default(global)?));
    }
    let path = Path::new(spec);
    let bank = with_path(path, FilterBank::from_json(&read(path)?))?;
    agree(global, bank.field(), spec)?;
    Ok(bank)
}

pub fn load_frame(spec: &str, global: &Global, random: RandomFrame) -> CliResult<FrameFilterSet> {
    match spec {
        "haar" => Ok(FrameFilterSet::haar_derived(
            &field_or_default(global)?,
            random.n.max(1),
        )),
        "random" => Ok(FrameFilterSet::random_perturbed(
            &field_or_default(global)?,
            random.n.max(1),
            random.s,
            &mut rng(global.seed),
        )),
        _ => {
            let path = Path::new(spec);
            let ffs = with_path(path, FrameFilterSet::from_json(&read(path)?))?;
            agree(global, ffs.field(), spec)?;
            Ok(ffs)
        }
    }
}

pub fn load_step(path: &Path, field: &LocalField) -> CliResult<StepFn> {
    let f = with_path(path, StepFn::from_json(&read(path)?))?;
    if f.field() != field {
        return input(format!(
            "{}: function is over {:?}, expected {:?}",
            path.display(),
            f.field().params(),
            field.params()
        ));
    }
    Ok(f)
}

pub fn write_file(dir: &Path, name: &str, contents: &[u8]) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
