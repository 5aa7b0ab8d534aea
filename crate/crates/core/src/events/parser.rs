//! Recursive-descent parser for event expressions.
//!
//! ```text
//! expr   := term ('|' term)*
//! term   := factor ('&' factor)*
//! factor := '~' factor | atom | '(' expr ')' | '1' | '0'
//! ```

use super::{Event, Universe};
use crate::error::{Error, Result};

pub(super) struct Parser<'a> {
    src: &'a str,
    pos: usize,
    universe: &'a mut Universe,
}

impl<'a> Parser<'a> {
    pub(super) fn new(src: &'a str, universe: &'a mut Universe) -> Self {
        Parser { src, pos: 0, universe }
    }

    pub(super) fn parse(mut self) -> Result<Event> {
        let event = self.expr()?;
        self.skip_ws();
        if let Some(c) = self.peek() {
            return Err(self.error(format!("unexpected {c:?}")));
        }
        Ok(event)
    }

    fn error(&self, message: String) -> Error {
        Error::Syntax { position: self.pos, message }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.pos += want.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Event> {
        let mut lhs = self.term()?;
        while self.eat('|') {
            let rhs = self.term()?;
            lhs = lhs.or(&rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Event> {
        let mut lhs = self.factor()?;
        while self.eat('&') {
            let rhs = self.factor()?;
            lhs = lhs.and(&rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Event> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("unexpected end of input".into())),
            Some('~') => {
                self.pos += 1;
                Ok(self.factor()?.not())
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    self.skip_ws();
                    return Err(self.error("expected ')'".into()));
                }
                Ok(inner)
            }
            Some('1') => {
                self.pos += 1;
                Ok(Event::True)
            }
            Some('0') => {
                self.pos += 1;
                Ok(Event::False)
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let name = &self.src[start..self.pos];
                let index = self.universe.atom(name)?;
                Ok(Event::Atom(index))
            }
            Some(c) => Err(self.error(format!("unexpected {c:?}"))),
        }
    }
}
