use std::collections::BTreeMap;

use crate::core::{
    Context, DecoratedSpec, Equation, OpDecl, ProductType, SortName, Term, TheoryMorphism,
};
use crate::semantics::{FinModel, OpTable};

use super::lexer::{lex, Tok, Token};
use super::DslError;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, DslError> {
        Ok(Parser {
            tokens: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, token: &Token, msg: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Syntax {
            line: token.line,
            col: token.col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, DslError> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            self.error(&t, format!("expected {}, found {}", tok, t.tok))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Token), DslError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => self.error(&t, format!("expected an identifier, found {}", other)),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Token, DslError> {
        let (word, t) = self.expect_ident()?;
        if word == kw {
            Ok(t)
        } else {
            self.error(&t, format!("expected `{}`, found `{}`", kw, word))
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn expect_eof(&mut self) -> Result<(), DslError> {
        let t = self.next();
        if t.tok == Tok::Eof {
            Ok(())
        } else {
            self.error(&t, format!("expected end of input, found {}", t.tok))
        }
    }

    /// `ident` is a variable; `ident(t, ..., t)` is an application.
    fn term(&mut self) -> Result<Term, DslError> {
        let (head, _) = self.expect_ident()?;
        if self.peek().tok != Tok::LParen {
            return Ok(Term::var(head));
        }
        self.expect(Tok::LParen)?;
        let mut args = vec![];
        if self.peek().tok != Tok::RParen {
            loop {
                args.push(self.term()?);
                if self.peek().tok == Tok::Comma {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        Ok(Term::App(head, args))
    }

    /// `(x1:S1, ..., xk:Sk)`, possibly empty.
    fn context(&mut self) -> Result<Context, DslError> {
        self.expect(Tok::LParen)?;
        let mut ctx = Context::empty();
        if self.peek().tok != Tok::RParen {
            loop {
                let (var, _) = self.expect_ident()?;
                self.expect(Tok::Colon)?;
                let (sort, _) = self.expect_ident()?;
                ctx.push(var, SortName::new(sort));
                if self.peek().tok == Tok::Comma {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        Ok(ctx)
    }

    /// Comma-separated identifiers up to (not consuming) the stop token.
    fn ident_list(&mut self) -> Result<Vec<(String, Token)>, DslError> {
        let mut out = vec![self.expect_ident()?];
        while self.peek().tok == Tok::Comma {
            self.next();
            out.push(self.expect_ident()?);
        }
        Ok(out)
    }
}

/// Parses and validates a specification.
pub fn parse_spec(text: &str) -> Result<DecoratedSpec, DslError> {
    let mut p = Parser::new(text)?;
    p.expect_keyword("spec")?;
    let (name, _) = p.expect_ident()?;
    p.expect(Tok::LBrace)?;
    let mut spec = DecoratedSpec::new(name);
    loop {
        if p.peek().tok == Tok::RBrace {
            p.next();
            break;
        }
        let (word, at) = p.expect_ident()?;
        match word.as_str() {
            "param" => {
                let (which, _) = p.expect_ident()?;
                match which.as_str() {
                    "sort" => {
                        let (s, _) = p.expect_ident()?;
                        if spec.param_sort.is_some() {
                            return p.error(&at, "a second `param sort` is not allowed");
                        }
                        let sort = SortName::new(s);
                        spec.param_sort = Some(sort.clone());
                        spec.sorts.push(sort);
                    }
                    "const" => {
                        let (c, _) = p.expect_ident()?;
                        p.expect(Tok::Colon)?;
                        let (s, _) = p.expect_ident()?;
                        if spec.param_const.is_some() {
                            return p.error(&at, "a second `param const` is not allowed");
                        }
                        spec.param_const = Some(c.clone());
                        spec.ops
                            .push(OpDecl::new(c, ProductType::unit(), SortName::new(s), false));
                    }
                    other => {
                        return p.error(&at, format!("expected `sort` or `const` after `param`, found `{}`", other))
                    }
                }
            }
            "sort" => {
                let (s, _) = p.expect_ident()?;
                spec.sorts.push(SortName::new(s));
            }
            "pure" | "op" => {
                let pure = word == "pure";
                if pure {
                    p.expect_keyword("op")?;
                }
                let (op_name, _) = p.expect_ident()?;
                p.expect(Tok::Colon)?;
                let mut dom = vec![];
                if p.peek().tok != Tok::Arrow {
                    for (s, _) in p.ident_list()? {
                        dom.push(SortName::new(s));
                    }
                }
                p.expect(Tok::Arrow)?;
                let (cod, _) = p.expect_ident()?;
                spec.ops.push(OpDecl::new(
                    op_name,
                    ProductType::new(dom),
                    SortName::new(cod),
                    pure,
                ));
            }
            "eq" => {
                let context = p.context()?;
                let lhs = p.term()?;
                p.expect(Tok::Equals)?;
                let rhs = p.term()?;
                spec.eqs.push(Equation::new(context, lhs, rhs));
            }
            other => {
                return p.error(
                    &at,
                    format!("expected `sort`, `op`, `pure`, `eq` or `param`, found `{}`", other),
                )
            }
        }
    }
    p.expect_eof()?;
    spec.validated().map_err(DslError::Invalid)
}

/// Parses a finite model of `spec` and checks carriers and table totality.
pub fn parse_model(text: &str, spec: &DecoratedSpec) -> Result<FinModel, DslError> {
    let mut p = Parser::new(text)?;
    p.expect_keyword("model")?;
    let (name, _) = p.expect_ident()?;
    p.expect_keyword("for")?;
    let (for_name, for_tok) = p.expect_ident()?;
    if for_name != spec.name {
        return p.error(
            &for_tok,
            format!("model is for `{}` but the specification is `{}`", for_name, spec.name),
        );
    }
    let mut partial = false;
    if p.at_keyword("partial") {
        p.next();
        partial = true;
    }
    let header = p.expect(Tok::LBrace)?;

    let mut carriers: BTreeMap<SortName, Vec<String>> = BTreeMap::new();
    // raw op entries: (inputs with positions, output with position)
    type RawEntry = (Vec<(String, Token)>, (String, Token));
    let mut raw_ops: Vec<(String, Token, Vec<RawEntry>)> = vec![];
    loop {
        if p.peek().tok == Tok::RBrace {
            p.next();
            break;
        }
        let (word, at) = p.expect_ident()?;
        match word.as_str() {
            "sort" => {
                let (s, stok) = p.expect_ident()?;
                let sort = SortName::new(&s);
                if !spec.has_sort(&sort) {
                    return p.error(&stok, format!("unknown sort `{}`", s));
                }
                if carriers.contains_key(&sort) {
                    return p.error(&stok, format!("duplicate carrier for sort `{}`", s));
                }
                p.expect(Tok::Equals)?;
                p.expect(Tok::LBrace)?;
                let mut elems: Vec<String> = vec![];
                if p.peek().tok != Tok::RBrace {
                    for (e, etok) in p.ident_list()? {
                        if elems.contains(&e) {
                            return p.error(&etok, format!("duplicate element `{}`", e));
                        }
                        elems.push(e);
                    }
                }
                p.expect(Tok::RBrace)?;
                carriers.insert(sort, elems);
            }
            "op" => {
                let (op_name, otok) = p.expect_ident()?;
                if spec.op(&op_name).is_none() {
                    return p.error(&otok, format!("unknown op `{}`", op_name));
                }
                if raw_ops.iter().any(|(o, _, _)| o == &op_name) {
                    return p.error(&otok, format!("duplicate table for op `{}`", op_name));
                }
                p.expect(Tok::Equals)?;
                p.expect(Tok::LBrace)?;
                let mut entries = vec![];
                if p.peek().tok != Tok::RBrace {
                    loop {
                        p.expect(Tok::LParen)?;
                        let inputs = if p.peek().tok == Tok::RParen {
                            vec![]
                        } else {
                            p.ident_list()?
                        };
                        p.expect(Tok::RParen)?;
                        p.expect(Tok::Arrow)?;
                        let out = p.expect_ident()?;
                        entries.push((inputs, out));
                        if p.peek().tok == Tok::Comma {
                            p.next();
                        } else {
                            break;
                        }
                    }
                }
                p.expect(Tok::RBrace)?;
                raw_ops.push((op_name, otok, entries));
            }
            other => {
                return p.error(&at, format!("expected `sort` or `op`, found `{}`", other))
            }
        }
    }
    p.expect_eof()?;

    // resolve tables once every carrier is known
    let mut tables: BTreeMap<String, OpTable> = BTreeMap::new();
    for (op_name, otok, entries) in raw_ops {
        let decl = spec.op(&op_name).expect("checked above");
        let mut shape = vec![];
        for s in decl.dom.factors() {
            match carriers.get(s) {
                Some(c) => shape.push(c.len()),
                None => {
                    return p.error(
                        &otok,
                        format!("op `{}` needs a carrier for sort `{}`", op_name, s),
                    )
                }
            }
        }
        let cod_carrier = match carriers.get(&decl.cod) {
            Some(c) => c,
            None => {
                return p.error(
                    &otok,
                    format!("op `{}` needs a carrier for sort `{}`", op_name, decl.cod),
                )
            }
        };
        let total: usize = shape.iter().product();
        let mut data: Vec<Option<usize>> = vec![None; total];
        for (inputs, (out, otok2)) in entries {
            if inputs.len() != decl.arity() {
                let at = inputs
                    .first()
                    .map(|(_, t)| t.clone())
                    .unwrap_or_else(|| otok2.clone());
                return p.error(
                    &at,
                    format!("op `{}` expects {} inputs, found {}", op_name, decl.arity(), inputs.len()),
                );
            }
            let mut idx = 0usize;
            let mut labels = vec![];
            for ((label, ltok), sort) in inputs.iter().zip(decl.dom.factors()) {
                let carrier = &carriers[sort];
                let e = carrier.iter().position(|l| l == label).ok_or_else(|| {
                    DslError::UnknownElement {
                        line: ltok.line,
                        col: ltok.col,
                        sort: sort.to_string(),
                        element: label.clone(),
                    }
                })?;
                idx = idx * carrier.len() + e;
                labels.push(label.clone());
            }
            let out_e = cod_carrier.iter().position(|l| l == &out).ok_or_else(|| {
                DslError::UnknownElement {
                    line: otok2.line,
                    col: otok2.col,
                    sort: decl.cod.to_string(),
                    element: out.clone(),
                }
            })?;
            if data[idx].is_some() {
                return Err(DslError::DuplicateTableEntry {
                    line: otok2.line,
                    col: otok2.col,
                    op: op_name.clone(),
                    at: labels.join(", "),
                });
            }
            data[idx] = Some(out_e);
        }
        if let Some(missing_at) = data.iter().position(Option::is_none) {
            // reconstruct the missing input tuple for the message
            let mut rem = missing_at;
            let mut labels = vec![String::new(); shape.len()];
            for i in (0..shape.len()).rev() {
                let e = rem % shape[i];
                rem /= shape[i];
                labels[i] = carriers[&decl.dom.factors()[i]][e].clone();
            }
            return Err(DslError::MissingTableEntry {
                line: otok.line,
                col: otok.col,
                op: op_name.clone(),
                at: labels.join(", "),
            });
        }
        let data = data.into_iter().map(|o| o.expect("checked")).collect();
        tables.insert(op_name, OpTable::new(shape, data)?);
    }

    if !partial {
        for s in &spec.sorts {
            if !carriers.contains_key(s) {
                return p.error(
                    &header,
                    format!("total model lacks a carrier for sort `{}`", s),
                );
            }
        }
        for op in &spec.ops {
            if !tables.contains_key(&op.name) {
                return p.error(
                    &header,
                    format!("total model lacks a table for op `{}` (missing `partial`?)", op.name),
                );
            }
        }
    }

    let model = FinModel {
        name,
        spec: spec.clone(),
        carriers,
        tables,
        partial,
    };
    model.validate()?;
    Ok(model)
}

/// Parses a morphism between two already-parsed specifications and
/// validates its typing.
pub fn parse_morphism(
    text: &str,
    source: &DecoratedSpec,
    target: &DecoratedSpec,
) -> Result<TheoryMorphism, DslError> {
    let mut p = Parser::new(text)?;
    p.expect_keyword("morphism")?;
    let (name, _) = p.expect_ident()?;
    p.expect(Tok::Colon)?;
    let (src, stok) = p.expect_ident()?;
    if src != source.name {
        return p.error(&stok, format!("morphism source is `{}`, expected `{}`", src, source.name));
    }
    p.expect(Tok::Arrow)?;
    let (tgt, ttok) = p.expect_ident()?;
    if tgt != target.name {
        return p.error(&ttok, format!("morphism target is `{}`, expected `{}`", tgt, target.name));
    }
    p.expect(Tok::LBrace)?;

    let mut sort_map: BTreeMap<SortName, ProductType> = BTreeMap::new();
    // op items are resolved after all sort items are known
    let mut raw_ops: Vec<(String, Token, Vec<String>, Vec<Term>)> = vec![];
    loop {
        if p.peek().tok == Tok::RBrace {
            p.next();
            break;
        }
        let (word, at) = p.expect_ident()?;
        match word.as_str() {
            "sort" => {
                let (s, stok) = p.expect_ident()?;
                let sort = SortName::new(&s);
                if sort_map.contains_key(&sort) {
                    return p.error(&stok, format!("duplicate image for sort `{}`", s));
                }
                p.expect(Tok::Arrow)?;
                let image = if p.peek().tok == Tok::LParen {
                    p.expect(Tok::LParen)?;
                    p.expect(Tok::RParen)?;
                    ProductType::unit()
                } else {
                    ProductType::new(
                        p.ident_list()?
                            .into_iter()
                            .map(|(f, _)| SortName::new(f))
                            .collect(),
                    )
                };
                sort_map.insert(sort, image);
            }
            "op" => {
                let (op_name, otok) = p.expect_ident()?;
                p.expect(Tok::LParen)?;
                let vars = if p.peek().tok == Tok::RParen {
                    vec![]
                } else {
                    p.ident_list()?.into_iter().map(|(v, _)| v).collect()
                };
                p.expect(Tok::RParen)?;
                p.expect(Tok::Arrow)?;
                // the image is either a single term or a tuple `()`/`(t, u)`
                let terms = if p.peek().tok == Tok::LParen {
                    p.expect(Tok::LParen)?;
                    let mut ts = vec![];
                    if p.peek().tok != Tok::RParen {
                        loop {
                            ts.push(p.term()?);
                            if p.peek().tok == Tok::Comma {
                                p.next();
                            } else {
                                break;
                            }
                        }
                    }
                    p.expect(Tok::RParen)?;
                    ts
                } else {
                    vec![p.term()?]
                };
                raw_ops.push((op_name, otok, vars, terms));
            }
            other => {
                return p.error(&at, format!("expected `sort` or `op`, found `{}`", other))
            }
        }
    }
    p.expect_eof()?;

    let mut morphism = TheoryMorphism {
        name,
        source: source.clone(),
        target: target.clone(),
        sort_map,
        op_map: BTreeMap::new(),
    };
    for (op_name, otok, vars, terms) in raw_ops {
        let decl = match source.op(&op_name) {
            Some(d) => d,
            None => return p.error(&otok, format!("unknown op `{}`", op_name)),
        };
        let expanded = morphism
            .product_image(&decl.dom)
            .map_err(DslError::Core)?;
        if vars.len() != expanded.len() {
            return p.error(
                &otok,
                format!(
                    "op `{}` needs {} image variables (its domain expands to {}), found {}",
                    op_name,
                    expanded.len(),
                    expanded,
                    vars.len()
                ),
            );
        }
        let ctx = Context::new(vars.into_iter().zip(expanded.factors().iter().cloned()).collect());
        morphism.op_map.insert(op_name, (ctx, terms));
    }
    morphism.validate()?;
    Ok(morphism)
}
