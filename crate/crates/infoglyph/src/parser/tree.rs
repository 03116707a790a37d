//! Line lexer and indentation tree for the model syntax.
//!
//! The grammar is a flat YAML-compatible subset: `key: value` pairs with
//! nesting expressed by indentation. Keys and scalar values may be wrapped
//! in single or double quotes. Full-line comments start with `#`; a `#`
//! inside a value is literal text.

use super::{Diagnostic, Severity};

/// One parsed line with its nested children.
#[derive(Debug, Clone)]
pub struct Node {
    pub line: usize,
    pub key: String,
    pub value: Option<String>,
    pub children: Vec<Node>,
}

/// Parses source text into a forest of nodes. Indentation is free-form:
/// a line is a child of the nearest preceding line with smaller indent.
/// Lexical problems become error diagnostics; the builder itself is total.
pub fn build_tree(source: &str) -> (Vec<Node>, Vec<Diagnostic>) {
    let mut diagnostics = Vec::new();
    let mut roots: Vec<Node> = Vec::new();
    // Stack of (indent, path into the forest).
    let mut stack: Vec<(usize, Vec<usize>)> = Vec::new();

    for (index, raw_line) in source.lines().enumerate() {
        let line_no = index + 1;
        let trimmed_end = raw_line.trim_end();
        if trimmed_end.trim_start().is_empty() {
            continue;
        }
        let indent = trimmed_end.len() - trimmed_end.trim_start().len();
        let content = trimmed_end.trim_start();
        if content.starts_with('#') {
            continue;
        }

        let (key, rest) = match split_key(content) {
            Ok(pair) => pair,
            Err(message) => {
                diagnostics.push(Diagnostic {
                    severity: Severity::Error,
                    line: line_no,
                    key_path: content.chars().take(40).collect(),
                    message,
                });
                continue;
            }
        };
        let value = {
            let trimmed = rest.trim();
            if trimmed.is_empty() {
                None
            } else {
                Some(unquote(trimmed))
            }
        };

        let node = Node {
            line: line_no,
            key,
            value,
            children: Vec::new(),
        };

        while let Some((open_indent, _)) = stack.last() {
            if *open_indent >= indent {
                stack.pop();
            } else {
                break;
            }
        }
        let path = match stack.last() {
            None => {
                roots.push(node);
                vec![roots.len() - 1]
            }
            Some((_, parent_path)) => {
                let parent = node_at_mut(&mut roots, parent_path);
                parent.children.push(node);
                let mut path = parent_path.clone();
                path.push(parent.children.len() - 1);
                path
            }
        };
        stack.push((indent, path));
    }

    (roots, diagnostics)
}

fn node_at_mut<'a>(roots: &'a mut [Node], path: &[usize]) -> &'a mut Node {
    let mut node = &mut roots[path[0]];
    for &i in &path[1..] {
        node = &mut node.children[i];
    }
    node
}

/// Splits `key: rest`. The key may be quoted (chart data labels are).
fn split_key(content: &str) -> Result<(String, &str), String> {
    if let Some(quote) = content.chars().next().filter(|c| *c == '"' || *c == '\'') {
        let body = &content[quote.len_utf8()..];
        let close = body
            .find(quote)
            .ok_or_else(|| format!("unterminated {quote} quote in key"))?;
        let key = body[..close].to_string();
        let after = body[close + quote.len_utf8()..].trim_start();
        let rest = after
            .strip_prefix(':')
            .ok_or_else(|| "expected `:` after quoted key".to_string())?;
        if key.is_empty() {
            return Err("empty key".to_string());
        }
        Ok((key, rest))
    } else {
        let colon = content
            .find(':')
            .ok_or_else(|| "expected `key: value`".to_string())?;
        let key = content[..colon].trim();
        if key.is_empty() {
            return Err("empty key".to_string());
        }
        Ok((key.to_string(), &content[colon + 1..]))
    }
}

/// Strips one layer of matching quotes and resolves the `\$`, `\"`, `\'`
/// escapes. Unquoted scalars get the same escape treatment so `\$` works
/// in bare values too.
fn unquote(scalar: &str) -> String {
    let inner = if scalar.len() >= 2 {
        let first = scalar.chars().next().unwrap();
        if (first == '"' || first == '\'') && scalar.ends_with(first) {
            &scalar[first.len_utf8()..scalar.len() - first.len_utf8()]
        } else {
            scalar
        }
    } else {
        scalar
    };
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars().peekable();
    while let Some(ch) = chars.next() {
        if ch == '\\' {
            match chars.peek() {
                Some('$') | Some('"') | Some('\'') | Some('\\') => {
                    out.push(chars.next().unwrap());
                }
                _ => out.push('\\'),
            }
        } else {
            out.push(ch);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nesting_follows_indentation() {
        let source = "head:\n  position: 5x5\n  title:\n    value: Hi\nbox1:\n  size: 1x1\n";
        let (roots, diags) = build_tree(source);
        assert!(diags.is_empty());
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].key, "head");
        assert_eq!(roots[0].children.len(), 2);
        assert_eq!(roots[0].children[1].key, "title");
        assert_eq!(
            roots[0].children[1].children[0].value.as_deref(),
            Some("Hi")
        );
        assert_eq!(roots[1].key, "box1");
    }

    #[test]
    fn quoted_values_and_keys() {
        let source = "data:\n  \"Scope1\": \"76,25\"\n  'Scope2': '46,33'\n";
        let (roots, diags) = build_tree(source);
        assert!(diags.is_empty());
        let data = &roots[0];
        assert_eq!(data.children[0].key, "Scope1");
        assert_eq!(data.children[0].value.as_deref(), Some("76,25"));
        assert_eq!(data.children[1].key, "Scope2");
    }

    #[test]
    fn escaped_dollar_unescapes() {
        let (roots, _) = build_tree("value: \"US\\$7.8 billion\"\n");
        assert_eq!(roots[0].value.as_deref(), Some("US$7.8 billion"));
    }

    #[test]
    fn value_may_contain_colon_and_hash() {
        let (roots, diags) =
            build_tree("value: \"Key from report:\"\ntag: \"#PathwaysToTheFuture\"\n");
        assert!(diags.is_empty());
        assert_eq!(roots[0].value.as_deref(), Some("Key from report:"));
        assert_eq!(roots[1].value.as_deref(), Some("#PathwaysToTheFuture"));
    }

    #[test]
    fn comment_lines_are_skipped() {
        let (roots, diags) = build_tree("# a comment\nbgcolor: black\n");
        assert!(diags.is_empty());
        assert_eq!(roots.len(), 1);
    }

    #[test]
    fn missing_colon_is_diagnosed_not_fatal() {
        let (roots, diags) = build_tree("not a key value line\nbgcolor: black\n");
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].line, 1);
        assert_eq!(roots.len(), 1);
    }
}
