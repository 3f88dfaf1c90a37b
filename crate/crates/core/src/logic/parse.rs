//! ASCII formula and program syntax.
//!
//! ```text
//! formula := imp
//! imp     := or ( "->" imp )?
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := "~" unary | "[" program "]" unary | atom
//! atom    := "top" | "bot" | "S(" ag "," ag ")" | "C(" ag "," ag ")" | "P(" ag "," ag ")"
//!          | "K(" ag "," formula ")" | "Khat(" ag "," formula ")" | "Kplain(" ag "," formula ")"
//!          | "Exp(" ag ")" | "ExpAll" | "EExpAll" | "(" formula ")"
//! program := seq ( "+" seq )*
//! seq     := star ( ";" star )*
//! star    := patom "*"*
//! patom   := "?" unary | "skip" | call | "(" program ")"
//! ```
//!
//! Agents are single lowercase letters; a call is two of them (`ab`).

use crate::agent::Agent;
use crate::error::{GossipError, Result};
use crate::logic::formula::{Formula, Program};
use crate::sequence::Call;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Question,
    Semi,
    Plus,
    Star,
}

struct Lexer;

impl Lexer {
    fn tokens(text: &str) -> Result<Vec<(Tok, usize)>> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphanumeric() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
                continue;
            }
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                '~' | '!' => Tok::Tilde,
                '&' => Tok::Amp,
                '|' => Tok::Pipe,
                '?' => Tok::Question,
                ';' => Tok::Semi,
                '+' => Tok::Plus,
                '*' => Tok::Star,
                '-' if chars.get(i + 1) == Some(&'>') => {
                    i += 1;
                    Tok::Arrow
                }
                other => {
                    return Err(GossipError::Parse { column: col, message: format!("unexpected character `{other}`") })
                }
            };
            out.push((tok, col));
            i += 1;
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    n: usize,
}

impl Parser {
    fn column(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(GossipError::Parse { column: self.column(), message: message.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn agent(&mut self) -> Result<Agent> {
        if let Some(Tok::Ident(s)) = self.peek() {
            let mut chars = s.chars();
            if let (Some(c), None) = (chars.next(), chars.next()) {
                if let Some(a) = Agent::from_letter(c) {
                    if a.index() >= self.n {
                        return self.err(format!("agent `{c}` out of range for {} agents", self.n));
                    }
                    self.pos += 1;
                    return Ok(a);
                }
            }
        }
        self.err("expected an agent letter")
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut parts = vec![self.and()?];
        while self.eat(&Tok::Pipe) {
            parts.push(self.and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::or(parts) })
    }

    fn and(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::Amp) {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::and(parts) })
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat(&Tok::LBracket) {
            let p = self.program()?;
            self.expect(Tok::RBracket, "`]`")?;
            let body = self.unary()?;
            return Ok(Formula::boxed(p, body));
        }
        self.atom()
    }

    fn pair(&mut self) -> Result<(Agent, Agent)> {
        self.expect(Tok::LParen, "`(`")?;
        let x = self.agent()?;
        self.expect(Tok::Comma, "`,`")?;
        let y = self.agent()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok((x, y))
    }

    fn modal(&mut self) -> Result<(Agent, Formula)> {
        self.expect(Tok::LParen, "`(` (modal arguments must be bracketed)")?;
        let x = self.agent()?;
        self.expect(Tok::Comma, "`,`")?;
        let body = self.formula()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok((x, body))
    }

    fn atom(&mut self) -> Result<Formula> {
        if self.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(f);
        }
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            return self.err("expected a formula");
        };
        self.pos += 1;
        match name.as_str() {
            "top" => Ok(Formula::Top),
            "bot" => Ok(Formula::bot()),
            "S" => self.pair().map(|(x, y)| Formula::secret(x, y)),
            "C" => self.pair().map(|(x, y)| Formula::called(x, y)),
            "P" => self.pair().map(|(x, y)| Formula::condition(x, y)),
            "K" => self.modal().map(|(x, f)| Formula::knows(x, f)),
            "Khat" => self.modal().map(|(x, f)| Formula::khat(x, f)),
            "Kplain" => self.modal().map(|(x, f)| Formula::knows_plain(x, f)),
            "Exp" => {
                self.expect(Tok::LParen, "`(`")?;
                let x = self.agent()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Formula::exp(x, self.n))
            }
            "ExpAll" => Ok(Formula::exp_all(self.n)),
            "EExpAll" => Ok(Formula::everyone_super(self.n)),
            _ => {
                self.pos -= 1;
                self.err(format!("unknown identifier `{name}`"))
            }
        }
    }

    fn program(&mut self) -> Result<Program> {
        let mut p = self.seq()?;
        while self.eat(&Tok::Plus) {
            let q = self.seq()?;
            p = Program::choice(p, q);
        }
        Ok(p)
    }

    fn seq(&mut self) -> Result<Program> {
        let mut p = self.star()?;
        while self.eat(&Tok::Semi) {
            let q = self.star()?;
            p = Program::seq(p, q);
        }
        Ok(p)
    }

    fn star(&mut self) -> Result<Program> {
        let mut p = self.patom()?;
        while self.eat(&Tok::Star) {
            p = Program::star(p);
        }
        Ok(p)
    }

    fn patom(&mut self) -> Result<Program> {
        if self.eat(&Tok::Question) {
            return Ok(Program::test(self.unary()?));
        }
        if self.eat(&Tok::LParen) {
            let p = self.program()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(p);
        }
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            return self.err("expected a program");
        };
        if name == "skip" {
            self.pos += 1;
            return Ok(Program::Skip);
        }
        let letters: Vec<char> = name.chars().collect();
        if letters.len() == 2 {
            if let (Some(x), Some(y)) = (Agent::from_letter(letters[0]), Agent::from_letter(letters[1])) {
                if x.index() >= self.n || y.index() >= self.n {
                    return self.err(format!("call `{name}` out of range for {} agents", self.n));
                }
                let call = Call::new(x, y)?;
                self.pos += 1;
                return Ok(Program::call(call));
            }
        }
        self.err(format!("expected a call, `skip`, a test or a bracketed program, found `{name}`"))
    }

    fn finish(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            self.err("unexpected trailing input")
        } else {
            Ok(())
        }
    }
}

fn parser(text: &str, n: usize) -> Result<Parser> {
    crate::agent::check_agent_count(n)?;
    Ok(Parser { toks: Lexer::tokens(text)?, pos: 0, end_col: text.chars().count() + 1, n })
}

/// Parse a formula for an `n`-agent system, expanding all sugar.
pub fn parse_formula(text: &str, n: usize) -> Result<Formula> {
    let mut p = parser(text, n)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parse a program for an `n`-agent system.
pub fn parse_program(text: &str, n: usize) -> Result<Program> {
    let mut p = parser(text, n)?;
    let prog = p.program()?;
    p.finish()?;
    Ok(prog)
}
