use crate::diagnostic::{Diagnostic, SourceSpan};

use super::rules;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Word(String),
    Quoted(String),
    Pipe,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

impl Token {
    pub fn word(&self) -> Option<&str> {
        match &self.kind {
            TokenKind::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::Quoted(q) => format!("\"{q}\""),
            TokenKind::Pipe => "`|`".to_string(),
        }
    }
}

/// Splits one line into words, quoted strings and `|` separators. A `#`
/// outside quotes starts a comment. Columns count characters, not bytes.
pub(crate) fn lex_line(line: &str, line_no: usize) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c == '|' {
            tokens.push(Token {
                kind: TokenKind::Pipe,
                span: SourceSpan::new(line_no, i + 1, 1),
            });
            i += 1;
        } else if c == '"' {
            let start = i;
            let mut text = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => {
                        return Err(Diagnostic::error(
                            rules::UNTERMINATED_STRING,
                            "unterminated quoted string",
                            SourceSpan::new(line_no, start + 1, chars.len() - start),
                        ));
                    }
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') if matches!(chars.get(i + 1), Some('"') | Some('\\')) => {
                        text.push(chars[i + 1]);
                        i += 2;
                    }
                    Some(&ch) => {
                        text.push(ch);
                        i += 1;
                    }
                }
            }
            tokens.push(Token {
                kind: TokenKind::Quoted(text),
                span: SourceSpan::new(line_no, start + 1, i - start),
            });
        } else {
            let start = i;
            while i < chars.len()
                && !chars[i].is_whitespace()
                && !matches!(chars[i], '|' | '"' | '#')
            {
                i += 1;
            }
            tokens.push(Token {
                kind: TokenKind::Word(chars[start..i].iter().collect()),
                span: SourceSpan::new(line_no, start + 1, i - start),
            });
        }
    }
    Ok(tokens)
}

/// Quotes a string so that [`lex_line`] reads it back verbatim.
pub(crate) fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for ch in text.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push('"');
    out
}
