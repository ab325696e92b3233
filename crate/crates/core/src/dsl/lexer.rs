use std::sync::Arc;

use super::{DslError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Bare or quoted identifier; keywords are contextual and lex as identifiers.
    Ident(String, bool),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Colon,
    Comma,
    Dot,
    Eq,
    Arrow,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s, false) => format!("`{s}`"),
            Tok::Ident(s, true) => format!("\"{s}\""),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Characters allowed in a bare identifier besides alphanumerics and
/// non-ASCII symbols.
const IDENT_PUNCT: &str = "_*@[]'^+#!?~$&%|<";

pub fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || IDENT_PUNCT.contains(c) || (!c.is_ascii() && !c.is_whitespace())
}

/// Byte offsets of line starts, for span positions.
pub(crate) struct Lines {
    file: Arc<str>,
    starts: Vec<usize>,
    text: Arc<str>,
}

impl Lines {
    pub fn new(file: &str, text: &str) -> Self {
        let mut starts = vec![0];
        starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        Lines { file: file.into(), starts, text: text.into() }
    }

    fn position(&self, offset: usize) -> (usize, usize) {
        let line = self.starts.partition_point(|&s| s <= offset) - 1;
        let col = self.text[self.starts[line]..offset].chars().count();
        (line + 1, col + 1)
    }

    pub fn span(&self, start: usize, end: usize) -> SourceSpan {
        let (line, column) = self.position(start);
        let (end_line, end_column) = self.position(end);
        SourceSpan { file: self.file.clone(), start, end, line, column, end_line, end_column }
    }
}

pub(crate) fn lex(lines: &Lines, text: &str) -> Result<Vec<Token>, DslError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let at = |i: usize| bytes.get(i).map(|&(_, c)| c);
    let offset = |i: usize| bytes.get(i).map_or(text.len(), |&(o, _)| o);
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i].1;
        let start = offset(i);
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '/' && at(i + 1) == Some('/') {
            while i < bytes.len() && bytes[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        if c == '/' && at(i + 1) == Some('*') {
            let mut j = i + 2;
            loop {
                match at(j) {
                    None => return Err(DslError::lex("unterminated block comment", lines.span(start, start + 2))),
                    Some('*') if at(j + 1) == Some('/') => break,
                    _ => j += 1,
                }
            }
            i = j + 2;
            continue;
        }
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ';' => Some(Tok::Semi),
            ':' => Some(Tok::Colon),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, span: lines.span(start, offset(i + 1)) });
            i += 1;
            continue;
        }
        if c == '-' && at(i + 1) == Some('>') {
            out.push(Token { tok: Tok::Arrow, span: lines.span(start, offset(i + 2)) });
            i += 2;
            continue;
        }
        if c == '"' {
            let mut j = i + 1;
            let mut s = String::new();
            loop {
                match at(j) {
                    None | Some('\n') => return Err(DslError::lex("unterminated quoted identifier", lines.span(start, offset(j)))),
                    Some('"') => break,
                    Some('.') => return Err(DslError::lex("`.` is not allowed in an identifier", lines.span(start, offset(j + 1)))),
                    Some(ch) => s.push(ch),
                }
                j += 1;
            }
            if s.is_empty() {
                return Err(DslError::lex("empty quoted identifier", lines.span(start, offset(j + 1))));
            }
            out.push(Token { tok: Tok::Ident(s, true), span: lines.span(start, offset(j + 1)) });
            i = j + 1;
            continue;
        }
        if is_ident_char(c) {
            let mut j = i;
            while at(j).is_some_and(is_ident_char) {
                j += 1;
            }
            out.push(Token { tok: Tok::Ident(text[start..offset(j)].to_string(), false), span: lines.span(start, offset(j)) });
            i = j;
            continue;
        }
        return Err(DslError::lex(format!("unexpected character `{c}`"), lines.span(start, offset(i + 1))));
    }
    out.push(Token { tok: Tok::Eof, span: lines.span(text.len(), text.len()) });
    Ok(out)
}
