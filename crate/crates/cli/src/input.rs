use std::fs;
use std::io::{self, Read};

use hfcode::hf::{ack_decode, AckCode, HfSet};
use hfcode::system::{graph_to_system, PointedGraph, SetSystem};

use crate::{Failure, InputFormat};

/// Contents of `path`, or stdin for `None` and `-`.
pub fn read_source(path: Option<&str>) -> Result<String, Failure> {
    match path {
        None | Some("-") => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
            Ok(text)
        }
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Usage(format!("reading {p}: {e}"))),
    }
}

/// A system and its designated unknown.
pub fn read_system(path: Option<&str>, format: InputFormat) -> Result<(SetSystem, usize), Failure> {
    let text = read_source(path)?;
    match format {
        InputFormat::System => Ok((text.parse()?, 0)),
        InputFormat::Graph => {
            let g: PointedGraph = text.parse()?;
            Ok(graph_to_system(&g)?)
        }
        other => Err(Failure::Usage(format!(
            "--input {} is not a system format",
            name(other)
        ))),
    }
}

/// A well-founded set given as braces text or an Ackermann index.
pub fn read_set(text: &str, format: InputFormat) -> Result<HfSet, Failure> {
    match format {
        InputFormat::Braces => Ok(text.trim().parse()?),
        InputFormat::AckermannIndex => {
            let code: AckCode = text.trim().parse()?;
            Ok(ack_decode(&code)?)
        }
        other => Err(Failure::Usage(format!(
            "--input {} is not a set format",
            name(other)
        ))),
    }
}

fn name(f: InputFormat) -> &'static str {
    match f {
        InputFormat::System => "system",
        InputFormat::Graph => "graph",
        InputFormat::Braces => "braces",
        InputFormat::AckermannIndex => "ackermann-index",
    }
}
