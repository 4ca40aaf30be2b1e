//! Configuration snapshot files.
//!
//! Format: a header line `popmaj-config v1 n=<n>`, then one line per agent
//! with comma-separated fields in fixed order
//! `input,role,leader,resetcount,waitcount,rank,childmask,answer,timer`.
//! `childmask` is the 0–3 bit value (bit 0 = child rank 2i, bit 1 = child
//! rank 2i+1); all other fields use their display names.

use std::io::{BufRead, Write};
use std::path::Path;

use super::{AgentState, ChildMask, Configuration, EngineError, Input};

const HEADER_PREFIX: &str = "popmaj-config v1 n=";

pub fn write_snapshot<W: Write>(config: &Configuration, mut w: W) -> Result<(), EngineError> {
    writeln!(w, "{HEADER_PREFIX}{}", config.len())?;
    for (i, s) in config.states().iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            config.input(i),
            s.role,
            s.leader,
            s.resetcount,
            s.waitcount,
            s.rank,
            s.childmask.bits(),
            s.answer,
            s.timer,
        )?;
    }
    Ok(())
}

pub fn read_snapshot<R: BufRead>(r: R) -> Result<Configuration, EngineError> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines.next().ok_or(EngineError::Snapshot {
        line: 1,
        reason: "empty file".into(),
    })?;
    let header = header?;
    let n: usize = header
        .strip_prefix(HEADER_PREFIX)
        .and_then(|rest| rest.trim().parse().ok())
        .ok_or(EngineError::Snapshot {
            line: 1,
            reason: format!("bad header {header:?}, expected `{HEADER_PREFIX}<n>`"),
        })?;

    let mut inputs = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(EngineError::Snapshot {
                line: line_no,
                reason: format!("expected 9 fields, got {}", fields.len()),
            });
        }
        let bad = |reason: String| EngineError::Snapshot {
            line: line_no,
            reason,
        };
        let parse_num = |s: &str, what: &str| -> Result<u32, EngineError> {
            s.parse()
                .map_err(|_| bad(format!("bad {what} value {s:?}")))
        };
        inputs.push(fields[0].parse::<Input>().map_err(&bad)?);
        let mask_bits = parse_num(fields[6], "childmask")?;
        let childmask = u8::try_from(mask_bits)
            .ok()
            .and_then(ChildMask::from_bits)
            .ok_or_else(|| bad(format!("childmask {mask_bits} outside 0..=3")))?;
        states.push(AgentState {
            role: fields[1].parse().map_err(&bad)?,
            leader: fields[2].parse().map_err(&bad)?,
            resetcount: parse_num(fields[3], "resetcount")?,
            waitcount: parse_num(fields[4], "waitcount")?,
            rank: parse_num(fields[5], "rank")?,
            childmask,
            answer: fields[7].parse().map_err(&bad)?,
            timer: parse_num(fields[8], "timer")?,
        });
    }
    if inputs.len() != n {
        return Err(EngineError::Snapshot {
            line: inputs.len() + 1,
            reason: format!("header says n={n} but found {} agent lines", inputs.len()),
        });
    }
    Configuration::new(inputs, states)
}

pub fn save_snapshot(config: &Configuration, path: &Path) -> Result<(), EngineError> {
    let mut buf = Vec::new();
    write_snapshot(config, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}

pub fn load_snapshot(path: &Path) -> Result<Configuration, EngineError> {
    let file = std::fs::File::open(path)?;
    read_snapshot(std::io::BufReader::new(file))
}
