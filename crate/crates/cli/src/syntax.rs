//! Line-oriented block syntax.
//!
//! A file is a sequence of `include PATH` lines and blocks
//!
//! ```text
//! <kind> NAME [header tokens]
//!   record tokens
//!   ...
//! end
//! ```
//!
//! Tokens are separated by whitespace; a token containing whitespace, `#` or
//! `"` is written in double quotes with `\"` and `\\` escapes. `#` starts a
//! comment outside quotes.

use std::path::{Path, PathBuf};

use crate::error::{CliError, Location};

pub const KINDS: [&str; 8] = [
    "category",
    "functor",
    "correspondence",
    "monoid",
    "bimodule",
    "span",
    "chain",
    "lax",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub location: Location,
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub kind: String,
    pub name: String,
    /// Header tokens after the name.
    pub header: Vec<String>,
    pub location: Location,
    pub records: Vec<Line>,
}

/// Splits one line into tokens.
pub fn tokenize(text: &str, location: &Location) -> Result<Vec<String>, CliError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '#' {
            break;
        } else if c == '"' {
            chars.next();
            let mut token = String::new();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some('\\') => match chars.next() {
                        Some(e @ ('"' | '\\')) => token.push(e),
                        _ => return Err(CliError::parse(location, "bad escape in quoted token")),
                    },
                    Some(other) => token.push(other),
                    None => return Err(CliError::parse(location, "unterminated quoted token")),
                }
            }
            tokens.push(token);
        } else {
            let mut token = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '#' || c == '"' {
                    break;
                }
                token.push(c);
                chars.next();
            }
            tokens.push(token);
        }
    }
    Ok(tokens)
}

/// Quotes a token when it would not survive [`tokenize`] bare.
pub fn quote(token: &str) -> String {
    let bare = !token.is_empty() && !token.chars().any(|c| c.is_whitespace() || c == '#' || c == '"' || c == '\\');
    if bare {
        token.to_string()
    } else {
        let escaped = token.replace('\\', "\\\\").replace('"', "\\\"");
        format!("\"{escaped}\"")
    }
}

/// Resolves an `include` path token at a location into blocks.
pub type Includer<'a> = dyn FnMut(&str, &Location) -> Result<Vec<Block>, CliError> + 'a;

/// Parses text into blocks. `include` lines are resolved by `include`,
/// which receives the path token and its location.
pub fn parse_text(
    text: &str,
    file: &str,
    include: &mut Includer<'_>,
) -> Result<Vec<Block>, CliError> {
    let mut blocks = Vec::new();
    let mut open: Option<Block> = None;
    for (i, raw) in text.lines().enumerate() {
        let location = Location {
            file: file.to_string(),
            line: i + 1,
        };
        let tokens = tokenize(raw, &location)?;
        let Some(first) = tokens.first() else { continue };
        if let Some(block) = open.as_mut() {
            if first == "end" {
                if tokens.len() > 1 {
                    return Err(CliError::parse(&location, "unexpected tokens after `end`"));
                }
                blocks.push(open.take().expect("a block is open"));
            } else if KINDS.contains(&first.as_str()) {
                return Err(CliError::parse(
                    &location,
                    format!("{} `{}` is still open; missing `end`", block.kind, block.name),
                ));
            } else {
                block.records.push(Line { location, tokens });
            }
            continue;
        }
        if first == "include" {
            let [_, path] = tokens.as_slice() else {
                return Err(CliError::parse(&location, "`include` takes one path"));
            };
            blocks.extend(include(path, &location)?);
        } else if KINDS.contains(&first.as_str()) {
            let Some(name) = tokens.get(1) else {
                return Err(CliError::parse(&location, format!("`{first}` needs a name")));
            };
            open = Some(Block {
                kind: first.clone(),
                name: name.clone(),
                header: tokens[2..].to_vec(),
                location,
                records: Vec::new(),
            });
        } else {
            return Err(CliError::parse(
                &location,
                format!("expected `include` or a block kind ({}), found `{first}`", KINDS.join(", ")),
            ));
        }
    }
    if let Some(block) = open {
        return Err(CliError::parse(&block.location, format!("{} `{}` has no `end`", block.kind, block.name)));
    }
    Ok(blocks)
}

/// Resolves a path argument: `@name` refers to the fixture directory,
/// which is `$FINCORR_FIXTURES` when set.
pub fn resolve_path(arg: &str) -> PathBuf {
    match arg.strip_prefix('@') {
        Some(name) => fixture_root().join(name),
        None => PathBuf::from(arg),
    }
}

pub fn fixture_root() -> PathBuf {
    std::env::var_os("FINCORR_FIXTURES")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
}

/// Reads and parses a file, following includes relative to the including
/// file. Include cycles are reported.
pub fn parse_file(path: &Path) -> Result<Vec<Block>, CliError> {
    let mut stack = Vec::new();
    parse_file_inner(path, &mut stack)
}

fn parse_file_inner(path: &Path, stack: &mut Vec<PathBuf>) -> Result<Vec<Block>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let canonical = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
    stack.push(canonical);
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let file = path.display().to_string();
    let result = parse_text(&text, &file, &mut |target, location| {
        let target_path = match target.strip_prefix('@') {
            Some(_) => resolve_path(target),
            None => dir.join(target),
        };
        let key = target_path.canonicalize().unwrap_or_else(|_| target_path.clone());
        if stack.contains(&key) {
            return Err(CliError::parse(location, format!("include cycle through {}", target_path.display())));
        }
        parse_file_inner(&target_path, stack).map_err(|e| match e {
            CliError::Io { path, message } => CliError::parse(location, format!("cannot include {path}: {message}")),
            other => other,
        })
    });
    stack.pop();
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn here() -> Location {
        Location {
            file: "t".into(),
            line: 1,
        }
    }

    fn no_include(_: &str, l: &Location) -> Result<Vec<Block>, CliError> {
        Err(CliError::parse(l, "no includes here"))
    }

    #[test]
    fn tokens_and_quotes() {
        let t = tokenize(r#"morphism "a b" : x -> y  # comment"#, &here()).unwrap();
        assert_eq!(t, ["morphism", "a b", ":", "x", "->", "y"]);
        let t = tokenize(r#""say \"hi\"" "back\\slash""#, &here()).unwrap();
        assert_eq!(t, ["say \"hi\"", "back\\slash"]);
        assert!(tokenize("\"open", &here()).is_err());
        for s in ["plain", "", "a b", "#x", "q\"", "back\\"] {
            assert_eq!(tokenize(&quote(s), &here()).unwrap(), [s]);
        }
    }

    #[test]
    fn blocks_with_locations() {
        let text = "# header\ncategory C\n  object a\nend\n\nspan S\n  left 1 : 0\n  right 1 : 0\nend\n";
        let blocks = parse_text(text, "f", &mut no_include).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!((blocks[0].kind.as_str(), blocks[0].name.as_str(), blocks[0].location.line), ("category", "C", 2));
        assert_eq!(blocks[1].records[1].location.line, 8);
    }

    #[test]
    fn structural_errors_are_located() {
        let err = parse_text("category C\n object a\n", "f", &mut no_include).unwrap_err();
        assert!(err.to_string().contains("f:1"), "{err}");
        let err = parse_text("\n\nbogus x\n", "f", &mut no_include).unwrap_err();
        assert!(err.to_string().contains("f:3"), "{err}");
        let err = parse_text("category\n", "f", &mut no_include).unwrap_err();
        assert!(err.to_string().contains("needs a name"), "{err}");
    }
}
