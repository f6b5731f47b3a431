use std::collections::HashMap;

use crate::diagnostic::{Diagnostic, SourceSpan};
use crate::taxonomy::{
    Action, ActionCode, AgentContactTag, BendLevel, Dataset, DeformationSet, EnvContactTag,
    GraspTag, MotionTag, ObjectDim, PerArm, SlidingSlots, SlidingTag, Task, UnknownToken, Version,
};

use super::lexer::{lex_line, Token, TokenKind};
use super::{is_ident, rules, FIELDS};

/// Where each task and action was declared in the source text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    pub tasks: HashMap<String, SourceSpan>,
    pub actions: HashMap<String, SourceSpan>,
}

impl SourceMap {
    pub fn action(&self, id: &str) -> Option<SourceSpan> {
        self.actions.get(id).copied()
    }
}

/// Parses a `.tdom` document. Any error discards the whole dataset.
pub fn parse_dataset(text: &str) -> Result<Dataset, Vec<Diagnostic>> {
    parse_with_source_map(text).map(|(dataset, _)| dataset)
}

pub fn parse_with_source_map(text: &str) -> Result<(Dataset, SourceMap), Vec<Diagnostic>> {
    let mut parser = Parser::default();
    for (idx, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        parser.line(line, idx + 1);
    }
    parser.finish()
}

#[derive(Default)]
struct Parser {
    version: Option<Version>,
    tasks: Vec<PendingTask>,
    map: SourceMap,
    diagnostics: Vec<Diagnostic>,
}

struct PendingTask {
    task: Task,
    header: SourceSpan,
    has_object_line: bool,
    /// A malformed header still opens a task so its actions are checked.
    broken: bool,
    /// Any `action` line, parsed or not; suppresses the empty-task error.
    saw_action: bool,
}

/// Span just past the last token, for "expected X" errors at end of line.
fn end_of_line(tokens: &[Token], line_no: usize) -> SourceSpan {
    tokens
        .last()
        .map(|t| SourceSpan::new(line_no, t.span.column + t.span.length, 1))
        .unwrap_or(SourceSpan::new(line_no, 1, 1))
}

fn syntax(message: impl Into<String>, span: SourceSpan) -> Diagnostic {
    Diagnostic::error(rules::SYNTAX, message, span)
}

fn unknown_tag(err: UnknownToken, span: SourceSpan) -> Diagnostic {
    Diagnostic::error(rules::UNKNOWN_TAG, err.to_string(), span)
}

impl Parser {
    fn line(&mut self, line: &str, line_no: usize) {
        let tokens = match lex_line(line, line_no) {
            Ok(tokens) => tokens,
            Err(diag) => {
                self.diagnostics.push(diag);
                return;
            }
        };
        let Some(first) = tokens.first() else {
            return;
        };
        let result = match first.word() {
            Some("tdom-version") => self.header(&tokens, line_no),
            Some("task") => self.task(&tokens, line_no),
            Some("object") => self.object(&tokens, line_no),
            Some("action") => self.action(&tokens, line_no),
            _ => Err(syntax(
                format!(
                    "expected `task`, `object`, `action` or `tdom-version`, found {}",
                    first.describe()
                ),
                first.span,
            )),
        };
        if let Err(diag) = result {
            self.diagnostics.push(diag);
        }
    }

    fn expect<'t>(
        tokens: &'t [Token],
        idx: usize,
        line_no: usize,
        what: &str,
    ) -> Result<&'t Token, Diagnostic> {
        tokens.get(idx).ok_or_else(|| {
            syntax(
                format!("expected {what} at end of line"),
                end_of_line(tokens, line_no),
            )
        })
    }

    fn keyword(tokens: &[Token], idx: usize, line_no: usize, kw: &str) -> Result<(), Diagnostic> {
        let tok = Self::expect(tokens, idx, line_no, &format!("`{kw}`"))?;
        if tok.word() == Some(kw) {
            Ok(())
        } else {
            Err(syntax(
                format!("expected `{kw}`, found {}", tok.describe()),
                tok.span,
            ))
        }
    }

    fn quoted(
        tokens: &[Token],
        idx: usize,
        line_no: usize,
        what: &str,
    ) -> Result<String, Diagnostic> {
        let tok = Self::expect(tokens, idx, line_no, what)?;
        match &tok.kind {
            TokenKind::Quoted(text) => Ok(text.clone()),
            _ => Err(syntax(
                format!("expected quoted {what}, found {}", tok.describe()),
                tok.span,
            )),
        }
    }

    fn ident<'t>(
        tokens: &'t [Token],
        idx: usize,
        line_no: usize,
        what: &str,
    ) -> Result<&'t Token, Diagnostic> {
        let tok = Self::expect(tokens, idx, line_no, what)?;
        match tok.word() {
            Some(w) if is_ident(w) => Ok(tok),
            _ => Err(syntax(
                format!(
                    "expected {what} (letters, digits, `-`, `_`), found {}",
                    tok.describe()
                ),
                tok.span,
            )),
        }
    }

    fn no_trailing(tokens: &[Token], expected_len: usize) -> Result<(), Diagnostic> {
        match tokens.get(expected_len) {
            Some(extra) => Err(syntax(
                format!("unexpected {} after end of statement", extra.describe()),
                extra.span,
            )),
            None => Ok(()),
        }
    }

    fn header(&mut self, tokens: &[Token], line_no: usize) -> Result<(), Diagnostic> {
        if self.version.is_some() || !self.tasks.is_empty() {
            return Err(syntax(
                "`tdom-version` must appear once, before the first task",
                tokens[0].span,
            ));
        }
        let tok = Self::expect(tokens, 1, line_no, "version number")?;
        let parsed = tok.word().and_then(|w| {
            let (major, minor) = w.split_once('.')?;
            let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
            if !digits(major) || !digits(minor) {
                return None;
            }
            Some(Version {
                major: major.parse().ok()?,
                minor: minor.parse().ok()?,
            })
        });
        let version = parsed.ok_or_else(|| {
            Diagnostic::error(
                rules::BAD_VERSION,
                format!("expected version `MAJOR.MINOR`, found {}", tok.describe()),
                tok.span,
            )
        })?;
        Self::no_trailing(tokens, 2)?;
        self.version = Some(version);
        Ok(())
    }

    fn task(&mut self, tokens: &[Token], line_no: usize) -> Result<(), Diagnostic> {
        let header = tokens[0].span;
        let parsed = (|| {
            let name = Self::quoted(tokens, 1, line_no, "task name")?;
            Self::keyword(tokens, 2, line_no, "id")?;
            let id_tok = Self::ident(tokens, 3, line_no, "task id")?;
            Self::no_trailing(tokens, 4)?;
            Ok((
                name,
                id_tok.word().unwrap_or_default().to_string(),
                id_tok.span,
            ))
        })();
        let (name, id, broken, result) = match parsed {
            Ok((name, id, id_span)) => {
                if let Some(prev) = self.map.tasks.get(&id) {
                    let diag = Diagnostic::error(
                        rules::DUPLICATE_ID,
                        format!(
                            "duplicate task id `{id}` (first declared on line {})",
                            prev.line
                        ),
                        id_span,
                    );
                    (name, id, true, Err(diag))
                } else {
                    self.map.tasks.insert(id.clone(), id_span);
                    (name, id, false, Ok(()))
                }
            }
            Err(diag) => (String::new(), String::new(), true, Err(diag)),
        };
        self.tasks.push(PendingTask {
            task: Task {
                name,
                id,
                object: String::new(),
                object_dim: ObjectDim::default(),
                actions: Vec::new(),
            },
            header,
            has_object_line: false,
            broken,
            saw_action: false,
        });
        result
    }

    fn object(&mut self, tokens: &[Token], line_no: usize) -> Result<(), Diagnostic> {
        let span = tokens[0].span;
        let Some(pending) = self.tasks.last_mut() else {
            return Err(syntax("`object` line outside of a task", span));
        };
        if pending.has_object_line {
            return Err(syntax("task already has an `object` line", span));
        }
        if !pending.task.actions.is_empty() {
            return Err(syntax(
                "`object` line must precede the task's actions",
                span,
            ));
        }
        pending.has_object_line = true;
        let name = Self::quoted(tokens, 1, line_no, "object name")?;
        Self::keyword(tokens, 2, line_no, "dim")?;
        let dim_tok = Self::expect(tokens, 3, line_no, "object dimension")?;
        let dim = dim_tok
            .word()
            .ok_or_else(|| {
                syntax(
                    format!("expected 1D, 2D or 3D, found {}", dim_tok.describe()),
                    dim_tok.span,
                )
            })
            .and_then(|w| ObjectDim::from_token(w).map_err(|e| unknown_tag(e, dim_tok.span)))?;
        Self::no_trailing(tokens, 4)?;
        pending.task.object = name;
        pending.task.object_dim = dim;
        Ok(())
    }

    fn action(&mut self, tokens: &[Token], line_no: usize) -> Result<(), Diagnostic> {
        let span = tokens[0].span;
        let Some(pending) = self.tasks.last_mut() else {
            return Err(syntax("`action` line outside of a task", span));
        };
        pending.saw_action = true;
        let id_tok = Self::ident(tokens, 1, line_no, "action id")?;
        let id = id_tok.word().unwrap_or_default().to_string();
        let verb = Self::quoted(tokens, 2, line_no, "action verb")?;
        if verb.trim().is_empty() {
            return Err(syntax("action verb must not be empty", tokens[2].span));
        }

        let mut errors = Vec::new();
        if !pending.broken {
            let prefix = format!("{}-", pending.task.id);
            if !id.starts_with(&prefix) || id.len() == prefix.len() {
                errors.push(Diagnostic::error(
                    rules::ID_PREFIX,
                    format!("action id `{id}` must start with the task prefix `{prefix}`"),
                    id_tok.span,
                ));
            }
        }
        if let Some(prev) = self.map.actions.get(&id) {
            errors.push(Diagnostic::error(
                rules::DUPLICATE_ID,
                format!(
                    "duplicate action id `{id}` (first declared on line {})",
                    prev.line
                ),
                id_tok.span,
            ));
        }
        let code = parse_code(&tokens[3..], end_of_line(tokens, line_no), &mut errors);

        if !errors.is_empty() {
            let last = errors.pop().expect("non-empty");
            self.diagnostics.extend(errors);
            return Err(last);
        }
        self.map.actions.insert(id.clone(), id_tok.span);
        pending.task.actions.push(Action {
            id,
            verb,
            code: code.expect("code is present when there are no errors"),
        });
        Ok(())
    }

    fn finish(mut self) -> Result<(Dataset, SourceMap), Vec<Diagnostic>> {
        if self.tasks.is_empty() && self.diagnostics.is_empty() {
            self.diagnostics.push(Diagnostic::error(
                rules::EMPTY_DATASET,
                "empty dataset",
                SourceSpan::new(1, 1, 1),
            ));
        }
        for pending in &self.tasks {
            if !pending.saw_action && !pending.broken {
                self.diagnostics.push(Diagnostic::error(
                    rules::EMPTY_TASK,
                    format!("task `{}` has no actions", pending.task.id),
                    pending.header,
                ));
            }
        }
        if !self.diagnostics.is_empty() {
            self.diagnostics
                .sort_by_key(|d| d.span.map(|s| (s.line, s.column)).unwrap_or_default());
            return Err(self.diagnostics);
        }
        let dataset = Dataset {
            version: self.version.unwrap_or_default(),
            tasks: self.tasks.into_iter().map(|p| p.task).collect(),
        };
        Ok((dataset, self.map))
    }
}

/// Parses the `M: .. | G: .. | ...` tail of an action line.
fn parse_code(
    tokens: &[Token],
    eol: SourceSpan,
    errors: &mut Vec<Diagnostic>,
) -> Option<ActionCode> {
    let before = errors.len();
    let mut groups: Vec<Vec<&Token>> = vec![Vec::new()];
    for tok in tokens {
        if tok.kind == TokenKind::Pipe {
            if groups.last().is_some_and(|g| g.is_empty()) {
                errors.push(syntax("empty field between `|` separators", tok.span));
            }
            groups.push(Vec::new());
        } else {
            groups.last_mut().expect("non-empty").push(tok);
        }
    }
    if groups.len() > 1 && groups.last().is_some_and(|g| g.is_empty()) {
        let pipe = tokens.last().expect("trailing pipe");
        errors.push(syntax("trailing `|` without a field", pipe.span));
        groups.pop();
    }

    let mut values: [Option<Vec<&Token>>; 8] = Default::default();
    let mut next = 0;
    for group in groups.iter().filter(|g| !g.is_empty()) {
        let label_tok = group[0];
        let Some(label) = label_tok.word().and_then(|w| w.strip_suffix(':')) else {
            errors.push(syntax(
                format!(
                    "expected a field label such as `M:`, found {}",
                    label_tok.describe()
                ),
                label_tok.span,
            ));
            continue;
        };
        let Some(pos) = FIELDS.iter().position(|(name, _)| *name == label) else {
            errors.push(Diagnostic::error(
                rules::UNKNOWN_FIELD,
                format!(
                    "unknown field `{label}` (expected one of {})",
                    FIELDS.map(|(n, _)| n).join(", ")
                ),
                label_tok.span,
            ));
            continue;
        };
        if pos < next {
            errors.push(syntax(
                format!("field `{label}` is repeated or out of order"),
                label_tok.span,
            ));
            continue;
        }
        for (missing, _) in &FIELDS[next..pos] {
            errors.push(Diagnostic::error(
                rules::MISSING_FIELD,
                format!("missing required field `{missing}` before `{label}`"),
                label_tok.span,
            ));
        }
        next = pos + 1;
        let arity = FIELDS[pos].1;
        let vals = &group[1..];
        if vals.len() != arity {
            let span = vals
                .last()
                .map(|last| label_tok.span.join(last.span))
                .unwrap_or(label_tok.span);
            errors.push(Diagnostic::error(
                rules::ARITY,
                format!(
                    "field `{label}` expects {arity} value{}, found {}",
                    if arity == 1 { "" } else { "s" },
                    vals.len()
                ),
                span,
            ));
            continue;
        }
        values[pos] = Some(vals.to_vec());
    }
    for (missing, _) in &FIELDS[next..] {
        errors.push(Diagnostic::error(
            rules::MISSING_FIELD,
            format!("missing required field `{missing}`"),
            eol,
        ));
    }
    if errors.len() > before {
        return None;
    }

    let vals: Vec<Vec<&Token>> = values
        .into_iter()
        .map(|v| v.expect("all fields present"))
        .collect();
    let mut tag = |tok: &Token| -> Option<String> {
        match tok.word() {
            Some(w) => Some(w.to_string()),
            None => {
                errors.push(syntax(
                    format!("expected a tag, found {}", tok.describe()),
                    tok.span,
                ));
                None
            }
        }
    };
    let words: Vec<Vec<Option<String>>> = vals
        .iter()
        .map(|group| group.iter().map(|t| tag(t)).collect())
        .collect();

    let mut check = |idx: usize, k: usize, f: &dyn Fn(&str) -> Result<(), String>| {
        if let Some(w) = &words[idx][k] {
            if let Err(msg) = f(w) {
                let rule = rules::UNKNOWN_TAG;
                errors.push(Diagnostic::error(rule, msg, vals[idx][k].span));
            }
        }
    };
    check(0, 0, &|w| {
        MotionTag::from_token(w)
            .map(drop)
            .map_err(|e| e.to_string())
    });
    check(0, 1, &|w| {
        MotionTag::from_token(w)
            .map(drop)
            .map_err(|e| e.to_string())
    });
    check(1, 0, &|w| {
        GraspTag::from_token(w).map(drop).map_err(|e| e.to_string())
    });
    check(1, 1, &|w| {
        GraspTag::from_token(w).map(drop).map_err(|e| e.to_string())
    });
    check(2, 0, &|w| {
        EnvContactTag::from_token(w)
            .map(drop)
            .map_err(|e| e.to_string())
    });
    check(3, 0, &|w| {
        AgentContactTag::from_token(w)
            .map(drop)
            .map_err(|e| e.to_string())
    });
    check(3, 1, &|w| {
        AgentContactTag::from_token(w)
            .map(drop)
            .map_err(|e| e.to_string())
    });
    for k in 0..3 {
        check(4, k, &|w| {
            SlidingTag::from_token(w)
                .map(drop)
                .map_err(|e| e.to_string())
        });
    }
    check(5, 0, &|w| {
        DeformationSet::parse(w)
            .map(drop)
            .map_err(|e| e.to_string())
    });
    check(6, 0, &|w| {
        BendLevel::parse(w).map(drop).map_err(|e| e.to_string())
    });
    check(7, 0, &|w| {
        BendLevel::parse(w).map(drop).map_err(|e| e.to_string())
    });
    if errors.len() > before {
        return None;
    }

    let w = |idx: usize, k: usize| words[idx][k].as_deref().expect("checked");
    Some(ActionCode {
        motion: PerArm::new(
            MotionTag::from_token(w(0, 0)).ok()?,
            MotionTag::from_token(w(0, 1)).ok()?,
        ),
        grasp: PerArm::new(
            GraspTag::from_token(w(1, 0)).ok()?,
            GraspTag::from_token(w(1, 1)).ok()?,
        ),
        env: EnvContactTag::from_token(w(2, 0)).ok()?,
        agent: PerArm::new(
            AgentContactTag::from_token(w(3, 0)).ok()?,
            AgentContactTag::from_token(w(3, 1)).ok()?,
        ),
        sliding: SlidingSlots {
            env: SlidingTag::from_token(w(4, 0)).ok()?,
            left: SlidingTag::from_token(w(4, 1)).ok()?,
            right: SlidingTag::from_token(w(4, 2)).ok()?,
        },
        deformation: DeformationSet::parse(w(5, 0)).ok()?,
        structured: BendLevel::parse(w(6, 0)).ok()?,
        unstructured: BendLevel::parse(w(7, 0)).ok()?,
    })
}
