//! Tokens with 1-based line/column positions. `#` and `//` start a
//! comment that runs to the end of the line.

use std::fmt;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    /// Decimal digits only.
    Int(String),
    /// Anything with a `.` or an exponent.
    Decimal(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Int(s) | Tok::Decimal(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LexError {
    pub pos: Pos,
    pub found: char,
}

// longest first
const SYMBOLS: [&str; 18] = [
    "==", "<=", "->", "[", "]", "{", "}", "(", ")", ",", ":", ";", "=", "+", "-", "/", "*", "^",
];

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let at = |k: usize| chars.get(k).copied().unwrap_or('\0');
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && at(i + 1) == '/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while at(i).is_ascii_digit() {
                i += 1;
            }
            let mut decimal = false;
            if at(i) == '.' && at(i + 1).is_ascii_digit() {
                decimal = true;
                i += 1;
                while at(i).is_ascii_digit() {
                    i += 1;
                }
            }
            if matches!(at(i), 'e' | 'E') {
                let sign = usize::from(matches!(at(i + 1), '+' | '-'));
                if at(i + 1 + sign).is_ascii_digit() {
                    decimal = true;
                    i += 1 + sign;
                    while at(i).is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            if decimal {
                Tok::Decimal(text)
            } else {
                Tok::Int(text)
            }
        } else if c.is_alphabetic() || c == '_' {
            while at(i).is_alphanumeric() || at(i) == '_' {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            let sym = SYMBOLS
                .iter()
                .find(|s| s.chars().enumerate().all(|(k, sc)| at(i + k) == sc))
                .ok_or(LexError { pos, found: c })?;
            i += sym.len();
            Tok::Sym(sym)
        };
        col += i - start;
        out.push(Token { tok, pos });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers_split_from_the_imaginary_unit() {
        assert_eq!(
            toks("1/2-3i"),
            vec![
                Tok::Int("1".into()),
                Tok::Sym("/"),
                Tok::Int("2".into()),
                Tok::Sym("-"),
                Tok::Int("3".into()),
                Tok::Ident("i".into()),
                Tok::Eof
            ]
        );
        assert_eq!(toks("2.5e-3i")[0], Tok::Decimal("2.5e-3".into()));
        assert_eq!(toks("2x")[1], Tok::Ident("x".into()));
    }

    #[test]
    fn positions_and_comments() {
        let t = tokenize("let A = # note\n  matrix // more\n[").unwrap();
        assert_eq!(t[3].tok, Tok::Ident("matrix".into()));
        assert_eq!(t[3].pos, Pos { line: 2, col: 3 });
        assert_eq!(t[4].pos, Pos { line: 3, col: 1 });
        assert_eq!(tokenize("a @").unwrap_err(), LexError { pos: Pos { line: 1, col: 3 }, found: '@' });
    }

    #[test]
    fn two_character_symbols() {
        assert_eq!(toks("== <= -> =")[..4], [Tok::Sym("=="), Tok::Sym("<="), Tok::Sym("->"), Tok::Sym("=")]);
    }
}
