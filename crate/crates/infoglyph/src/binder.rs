//! Indicator binding: evaluates indirect-indicator formulas from an
//! account and substitutes `{{name}}` placeholders into text values and
//! chart data.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{Account, DataValue, Element, InfographicModel, Section, TextElement};

/// Arithmetic over decimal literals, indicator references, the four
/// basic operators, and parentheses.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Literal(f64),
    Indicator(String),
    Binary {
        op: BinaryOp,
        left: Box<Expression>,
        right: Box<Expression>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BindError {
    #[error("unknown indicator \"{0}\"")]
    UnknownIndicator(String),
    #[error("dependency cycle through indicator \"{0}\"")]
    Cycle(String),
    #[error("division by zero while evaluating \"{0}\"")]
    DivisionByZero(String),
    #[error("formula for \"{name}\" does not parse: {message}")]
    BadFormula { name: String, message: String },
    #[error("element \"{element}\": {source}")]
    InElement {
        element: String,
        #[source]
        source: Box<BindError>,
    },
    #[error("{} binding error(s):\n{}", .0.len(), format_errors(.0))]
    Multiple(Vec<BindError>),
}

fn format_errors(errors: &[BindError]) -> String {
    errors
        .iter()
        .map(|e| format!("  {e}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Recursive-descent parser for the formula grammar:
/// `expr := term (("+"|"-") term)*; term := factor (("*"|"/"|"×"|"÷") factor)*;
/// factor := number | name | "(" expr ")"`.
pub fn parse_expression(input: &str) -> Result<Expression, String> {
    let tokens = lex(input)?;
    let mut parser = ExprParser {
        tokens: &tokens,
        pos: 0,
    };
    let expr = parser.expression()?;
    if parser.pos != tokens.len() {
        return Err(format!(
            "unexpected trailing token {:?}",
            tokens[parser.pos]
        ));
    }
    Ok(expr)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Open,
    Close,
}

fn lex(input: &str) -> Result<Vec<Token>, String> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&ch) = chars.peek() {
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' => {
                chars.next();
                tokens.push(Token::Plus);
            }
            '-' | '−' => {
                chars.next();
                tokens.push(Token::Minus);
            }
            '*' | '×' => {
                chars.next();
                tokens.push(Token::Star);
            }
            '/' | '÷' => {
                chars.next();
                tokens.push(Token::Slash);
            }
            '(' => {
                chars.next();
                tokens.push(Token::Open);
            }
            ')' => {
                chars.next();
                tokens.push(Token::Close);
            }
            c if c.is_ascii_digit() => {
                let mut number = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() || c == '.' || c == ',' {
                        number.push(if c == ',' { '.' } else { c });
                        chars.next();
                    } else {
                        break;
                    }
                }
                let value: f64 = number
                    .parse()
                    .map_err(|_| format!("bad number \"{number}\""))?;
                tokens.push(Token::Number(value));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Name(name));
            }
            other => return Err(format!("unexpected character '{other}'")),
        }
    }
    Ok(tokens)
}

struct ExprParser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn expression(&mut self) -> Result<Expression, String> {
        let mut left = self.term()?;
        while let Some(op) = match self.peek() {
            Some(Token::Plus) => Some(BinaryOp::Add),
            Some(Token::Minus) => Some(BinaryOp::Sub),
            _ => None,
        } {
            self.pos += 1;
            let right = self.term()?;
            left = Expression::Binary {
                op,
                left: Box::new(left),
                right: Box::new(right),
            };
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<Expression, String> {
        let mut left = self.factor()?;
        while let Some(op) = match self.peek() {
            Some(Token::Star) => Some(BinaryOp::Mul),
            Some(Token::Slash) => Some(BinaryOp::Div),
            _ => None,
        } {
            self.pos += 1;
            let right = self.factor()?;
            left = Expression::Binary {
                op,
                left: Box::new(left),
                right: Box::new(right),
            };
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<Expression, String> {
        match self.peek().cloned() {
            Some(Token::Number(value)) => {
                self.pos += 1;
                Ok(Expression::Literal(value))
            }
            Some(Token::Name(name)) => {
                self.pos += 1;
                Ok(Expression::Indicator(name))
            }
            Some(Token::Minus) => {
                // Unary minus: parsed as 0 - factor.
                self.pos += 1;
                let inner = self.factor()?;
                Ok(Expression::Binary {
                    op: BinaryOp::Sub,
                    left: Box::new(Expression::Literal(0.0)),
                    right: Box::new(inner),
                })
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.expression()?;
                match self.peek() {
                    Some(Token::Close) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err("missing closing parenthesis".to_string()),
                }
            }
            other => Err(format!(
                "expected a number, name, or parenthesis, found {other:?}"
            )),
        }
    }
}

/// Evaluates one indicator. Direct indicators return their stored value;
/// indirect indicators evaluate their formula recursively with
/// memoization over the dependency DAG.
pub fn evaluate_indicator(name: &str, account: &Account) -> Result<f64, BindError> {
    let mut evaluator = Evaluator {
        account,
        cache: BTreeMap::new(),
        visiting: Vec::new(),
    };
    evaluator.evaluate(name)
}

struct Evaluator<'a> {
    account: &'a Account,
    cache: BTreeMap<String, f64>,
    visiting: Vec<String>,
}

impl Evaluator<'_> {
    fn evaluate(&mut self, name: &str) -> Result<f64, BindError> {
        if let Some(&value) = self.account.values.get(name) {
            return Ok(value);
        }
        if let Some(&cached) = self.cache.get(name) {
            return Ok(cached);
        }
        let Some(formula) = self.account.formulas.get(name) else {
            return Err(BindError::UnknownIndicator(name.to_string()));
        };
        if self.visiting.iter().any(|n| n == name) {
            return Err(BindError::Cycle(name.to_string()));
        }
        self.visiting.push(name.to_string());
        let expr = parse_expression(formula).map_err(|message| BindError::BadFormula {
            name: name.to_string(),
            message,
        })?;
        let value = self.eval_expr(&expr, name)?;
        self.visiting.pop();
        self.cache.insert(name.to_string(), value);
        Ok(value)
    }

    fn eval_expr(&mut self, expr: &Expression, context: &str) -> Result<f64, BindError> {
        match expr {
            Expression::Literal(value) => Ok(*value),
            Expression::Indicator(name) => self.evaluate(name),
            Expression::Binary { op, left, right } => {
                let l = self.eval_expr(left, context)?;
                let r = self.eval_expr(right, context)?;
                match op {
                    BinaryOp::Add => Ok(l + r),
                    BinaryOp::Sub => Ok(l - r),
                    BinaryOp::Mul => Ok(l * r),
                    BinaryOp::Div => {
                        if r == 0.0 {
                            Err(BindError::DivisionByZero(context.to_string()))
                        } else {
                            Ok(l / r)
                        }
                    }
                }
            }
        }
    }
}

/// Renders an evaluated indicator for text substitution.
///
/// With an explicit precision the value is formatted to that many decimal
/// places (ties to even). Without one, the value is rounded to 12
/// significant digits to absorb float noise, then printed in the shortest
/// form with no trailing zeros.
pub fn format_value(value: f64, decimals: Option<u32>) -> String {
    match decimals {
        Some(d) => format!("{value:.*}", d as usize),
        None => {
            if value == 0.0 {
                return "0".to_string();
            }
            let rounded: f64 = format!("{value:.11e}").parse().unwrap_or(value);
            format!("{rounded}")
        }
    }
}

/// Replaces each `{{name}}` / `{{name|decimals}}` placeholder with the
/// evaluated indicator. Text without placeholders is returned unchanged.
pub fn substitute_placeholders(text: &str, account: &Account) -> Result<String, BindError> {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(start) = rest.find("{{") {
        let Some(end_rel) = rest[start + 2..].find("}}") else {
            // Unterminated braces pass through verbatim.
            break;
        };
        let inner = &rest[start + 2..start + 2 + end_rel];
        out.push_str(&rest[..start]);
        let (name, decimals) = match inner.split_once('|') {
            Some((name, digits)) => {
                let parsed = digits
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| BindError::BadFormula {
                        name: name.trim().to_string(),
                        message: format!("\"{digits}\" is not a decimal-places count"),
                    })?;
                (name.trim(), Some(parsed))
            }
            None => (inner.trim(), None),
        };
        let value = evaluate_indicator(name, account)?;
        out.push_str(&format_value(value, decimals));
        rest = &rest[start + 2 + end_rel + 2..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Binds a model against an account: substitutes every text value and
/// resolves every chart-data reference. Geometry, fonts, colors, and
/// element order are untouched; binding an already-bound model is the
/// identity.
pub fn bind(model: &InfographicModel, account: &Account) -> Result<InfographicModel, BindError> {
    let mut errors = Vec::new();
    let mut bound = model.clone();

    let bind_text =
        |text: &mut TextElement, errors: &mut Vec<BindError>| match substitute_placeholders(
            &text.value,
            account,
        ) {
            Ok(value) => text.value = value,
            Err(e) => errors.push(BindError::InElement {
                element: text.id.clone(),
                source: Box::new(e),
            }),
        };

    let bind_data =
        |id: &str, data: &mut Vec<crate::model::ChartDatum>, errors: &mut Vec<BindError>| {
            for datum in data {
                if let DataValue::Reference(name) = &datum.value {
                    match evaluate_indicator(name, account) {
                        Ok(value) => datum.value = DataValue::Number(value),
                        Err(e) => errors.push(BindError::InElement {
                            element: id.to_string(),
                            source: Box::new(e),
                        }),
                    }
                }
            }
        };

    let bind_section = |section: &mut Section, errors: &mut Vec<BindError>| {
        for text in [&mut section.title, &mut section.subtitle, &mut section.text]
            .into_iter()
            .flatten()
        {
            bind_text(text, errors);
        }
        for element in &mut section.children {
            bind_element(element, account, errors, &bind_text, &bind_data);
        }
    };

    if let Some(head) = &mut bound.head {
        bind_section(head, &mut errors);
    }
    if let Some(foot) = &mut bound.foot {
        bind_section(foot, &mut errors);
    }
    for element in &mut bound.body {
        bind_element(element, account, &mut errors, &bind_text, &bind_data);
    }

    match errors.len() {
        0 => Ok(bound),
        1 => Err(errors.pop().unwrap()),
        _ => Err(BindError::Multiple(errors)),
    }
}

fn bind_element(
    element: &mut Element,
    account: &Account,
    errors: &mut Vec<BindError>,
    bind_text: &impl Fn(&mut TextElement, &mut Vec<BindError>),
    bind_data: &impl Fn(&str, &mut Vec<crate::model::ChartDatum>, &mut Vec<BindError>),
) {
    match element {
        Element::Text(text) => bind_text(text, errors),
        Element::Pie(pie) => {
            match substitute_placeholders(&pie.title, account) {
                Ok(title) => pie.title = title,
                Err(e) => errors.push(BindError::InElement {
                    element: pie.id.clone(),
                    source: Box::new(e),
                }),
            }
            bind_data(&pie.id, &mut pie.data, errors);
        }
        Element::Bar(bar) => bind_data(&bar.id, &mut bar.data, errors),
        Element::Picturegraph(pg) => {
            if let DataValue::Reference(name) = &pg.value {
                match evaluate_indicator(name, account) {
                    Ok(value) => pg.value = DataValue::Number(value),
                    Err(e) => errors.push(BindError::InElement {
                        element: pg.id.clone(),
                        source: Box::new(e),
                    }),
                }
            }
        }
        Element::Box(_) | Element::Image(_) => {}
    }
}
