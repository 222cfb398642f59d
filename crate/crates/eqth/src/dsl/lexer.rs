use super::DslError;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Comma,
    Arrow,
    Equals,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{}`", s),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Equals => write!(f, "`=`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '$'
}

/// Tokenizes the input. `#` starts a comment running to the end of the
/// line.
pub(crate) fn lex(text: &str) -> Result<Vec<Token>, DslError> {
    let mut tokens = vec![];
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                chars.next();
                bump(c, &mut line, &mut col);
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    chars.next();
                    bump(c, &mut line, &mut col);
                    if c == '\n' {
                        break;
                    }
                }
            }
            '{' | '}' | '(' | ')' | ':' | ',' | '=' => {
                chars.next();
                bump(c, &mut line, &mut col);
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ':' => Tok::Colon,
                    ',' => Tok::Comma,
                    _ => Tok::Equals,
                };
                tokens.push(Token { tok, line: tline, col: tcol });
            }
            '-' => {
                chars.next();
                bump(c, &mut line, &mut col);
                match chars.peek() {
                    Some('>') => {
                        chars.next();
                        bump('>', &mut line, &mut col);
                        tokens.push(Token { tok: Tok::Arrow, line: tline, col: tcol });
                    }
                    _ => {
                        return Err(DslError::Syntax {
                            line: tline,
                            col: tcol,
                            msg: "expected `->`".to_owned(),
                        })
                    }
                }
            }
            c if ident_start(c) => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if ident_continue(c) {
                        ident.push(c);
                        chars.next();
                        bump(c, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                tokens.push(Token { tok: Tok::Ident(ident), line: tline, col: tcol });
            }
            other => {
                return Err(DslError::Syntax {
                    line: tline,
                    col: tcol,
                    msg: format!("unexpected character `{}`", other),
                })
            }
        }
    }
    tokens.push(Token { tok: Tok::Eof, line, col });
    Ok(tokens)
}
