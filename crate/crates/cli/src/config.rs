//! Plain `key = value` config files merged under the command-line flags.

use std::path::Path;

/// Reads a config file into synthetic command-line arguments.
///
/// Each non-empty line is `key = value` (or a bare `key` for boolean
/// switches); `#` starts a comment. Keys are long flag names without the
/// leading dashes. The resulting arguments are inserted before the real
/// ones, so explicit flags win on conflict.
pub fn file_to_args(path: &Path) -> Result<Vec<String>, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {path:?}: {e}"))?;
    let mut args = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.split_once('=') {
            Some((key, value)) => {
                let (key, value) = (key.trim(), value.trim());
                if key.is_empty() || value.is_empty() {
                    return Err(format!("{path:?}:{}: malformed entry '{raw}'", lineno + 1));
                }
                args.push(format!("--{key}"));
                args.push(value.to_string());
            }
            None => args.push(format!("--{line}")),
        }
    }
    Ok(args)
}

/// Splices config-derived arguments into the raw argv, right after the
/// subcommand token. Returns the rewritten argv and strips the `--config`
/// occurrence itself.
pub fn merge_into_argv(argv: Vec<String>) -> Result<Vec<String>, String> {
    let mut config_path: Option<String> = None;
    let mut stripped = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(arg) = it.next() {
        if arg == "--config" {
            config_path = Some(
                it.next()
                    .ok_or_else(|| "--config needs a file path".to_string())?,
            );
        } else if let Some(path) = arg.strip_prefix("--config=") {
            config_path = Some(path.to_string());
        } else {
            stripped.push(arg);
        }
    }
    let Some(path) = config_path else {
        return Ok(stripped);
    };
    let extra = file_to_args(Path::new(&path))?;
    // argv[0] is the program, argv[1] the subcommand; config flags go in
    // between so later (explicit) flags override them.
    if stripped.len() < 2 || stripped[1].starts_with('-') {
        return Err("--config requires a subcommand".into());
    }
    let mut merged = Vec::with_capacity(stripped.len() + extra.len());
    merged.extend_from_slice(&stripped[..2]);
    merged.extend(extra);
    merged.extend_from_slice(&stripped[2..]);
    Ok(merged)
}
