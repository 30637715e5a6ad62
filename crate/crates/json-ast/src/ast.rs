// Generated from a tree-sitter node-types document by `semascope generate`.
// Regenerate instead of editing.

use ::semascope_core::typed as rt;

/// Decodes a whole parse tree.
pub fn decode(term: &rt::Term) -> rt::Checked<Document> {
    rt::Checked::decode(term)
}

/// One of `array`, `false`, `null`, `number`, `object`, `string`, `true`.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Array(::std::boxed::Box<Array>),
    False(::std::boxed::Box<False>),
    Null(::std::boxed::Box<Null>),
    Number(::std::boxed::Box<Number>),
    Object(::std::boxed::Box<Object>),
    String(::std::boxed::Box<String>),
    True(::std::boxed::Box<True>),
}

impl rt::FromTerm for Value {
    fn accepts(kind: &str) -> bool {
        <Array as rt::FromTerm>::accepts(kind)
            || <False as rt::FromTerm>::accepts(kind)
            || <Null as rt::FromTerm>::accepts(kind)
            || <Number as rt::FromTerm>::accepts(kind)
            || <Object as rt::FromTerm>::accepts(kind)
            || <String as rt::FromTerm>::accepts(kind)
            || <True as rt::FromTerm>::accepts(kind)
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        let kind = term.kind.as_str();
        if <Array as rt::FromTerm>::accepts(kind) {
            return <Array as rt::FromTerm>::from_term(term).map(|v| Self::Array(::std::boxed::Box::new(v)));
        }
        if <False as rt::FromTerm>::accepts(kind) {
            return <False as rt::FromTerm>::from_term(term).map(|v| Self::False(::std::boxed::Box::new(v)));
        }
        if <Null as rt::FromTerm>::accepts(kind) {
            return <Null as rt::FromTerm>::from_term(term).map(|v| Self::Null(::std::boxed::Box::new(v)));
        }
        if <Number as rt::FromTerm>::accepts(kind) {
            return <Number as rt::FromTerm>::from_term(term).map(|v| Self::Number(::std::boxed::Box::new(v)));
        }
        if <Object as rt::FromTerm>::accepts(kind) {
            return <Object as rt::FromTerm>::from_term(term).map(|v| Self::Object(::std::boxed::Box::new(v)));
        }
        if <String as rt::FromTerm>::accepts(kind) {
            return <String as rt::FromTerm>::from_term(term).map(|v| Self::String(::std::boxed::Box::new(v)));
        }
        if <True as rt::FromTerm>::accepts(kind) {
            return <True as rt::FromTerm>::from_term(term).map(|v| Self::True(::std::boxed::Box::new(v)));
        }
        ::std::option::Option::None
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        match self {
            Self::Array(v) => rt::FromTerm::spans(v.as_ref(), out),
            Self::False(v) => rt::FromTerm::spans(v.as_ref(), out),
            Self::Null(v) => rt::FromTerm::spans(v.as_ref(), out),
            Self::Number(v) => rt::FromTerm::spans(v.as_ref(), out),
            Self::Object(v) => rt::FromTerm::spans(v.as_ref(), out),
            Self::String(v) => rt::FromTerm::spans(v.as_ref(), out),
            Self::True(v) => rt::FromTerm::spans(v.as_ref(), out),
        }
    }

    fn errors<'a>(&'a self, out: &mut ::std::vec::Vec<&'a rt::Term>) {
        match self {
            Self::Array(v) => rt::FromTerm::errors(v.as_ref(), out),
            Self::False(v) => rt::FromTerm::errors(v.as_ref(), out),
            Self::Null(v) => rt::FromTerm::errors(v.as_ref(), out),
            Self::Number(v) => rt::FromTerm::errors(v.as_ref(), out),
            Self::Object(v) => rt::FromTerm::errors(v.as_ref(), out),
            Self::String(v) => rt::FromTerm::errors(v.as_ref(), out),
            Self::True(v) => rt::FromTerm::errors(v.as_ref(), out),
        }
    }
}

/// `array`
#[derive(Debug, Clone, PartialEq)]
pub struct Array {
    pub ann: rt::SourceSpan,
    pub children: ::std::vec::Vec<rt::Checked<Value>>,
    pub extras: ::std::vec::Vec<rt::Term>,
}

impl rt::FromTerm for Array {
    fn accepts(kind: &str) -> bool {
        kind == "array"
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        let mut extras = rt::undeclared_fields(term, &[]);
        let slot = rt::split_children(term, <Value as rt::FromTerm>::accepts, &mut extras);
        let children = rt::many::<Value>(&slot);
        ::std::option::Option::Some(Self {
            ann: term.span,
            children,
            extras,
        })
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        out.push(self.ann);
        for c in &self.children {
            c.spans(out);
        }
        rt::extras_spans(&self.extras, out);
    }

    fn errors<'a>(&'a self, out: &mut ::std::vec::Vec<&'a rt::Term>) {
        for c in &self.children {
            c.errors(out);
        }
        rt::extras_errors(&self.extras, out);
    }
}

/// `document`
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub ann: rt::SourceSpan,
    pub children: ::std::vec::Vec<rt::Checked<Value>>,
    pub extras: ::std::vec::Vec<rt::Term>,
}

impl rt::FromTerm for Document {
    fn accepts(kind: &str) -> bool {
        kind == "document"
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        let mut extras = rt::undeclared_fields(term, &[]);
        let slot = rt::split_children(term, <Value as rt::FromTerm>::accepts, &mut extras);
        let children = rt::many::<Value>(&slot);
        ::std::option::Option::Some(Self {
            ann: term.span,
            children,
            extras,
        })
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        out.push(self.ann);
        for c in &self.children {
            c.spans(out);
        }
        rt::extras_spans(&self.extras, out);
    }

    fn errors<'a>(&'a self, out: &mut ::std::vec::Vec<&'a rt::Term>) {
        for c in &self.children {
            c.errors(out);
        }
        rt::extras_errors(&self.extras, out);
    }
}

/// `object`
#[derive(Debug, Clone, PartialEq)]
pub struct Object {
    pub ann: rt::SourceSpan,
    pub children: ::std::vec::Vec<rt::Checked<Pair>>,
    pub extras: ::std::vec::Vec<rt::Term>,
}

impl rt::FromTerm for Object {
    fn accepts(kind: &str) -> bool {
        kind == "object"
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        let mut extras = rt::undeclared_fields(term, &[]);
        let slot = rt::split_children(term, <Pair as rt::FromTerm>::accepts, &mut extras);
        let children = rt::many::<Pair>(&slot);
        ::std::option::Option::Some(Self {
            ann: term.span,
            children,
            extras,
        })
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        out.push(self.ann);
        for c in &self.children {
            c.spans(out);
        }
        rt::extras_spans(&self.extras, out);
    }

    fn errors<'a>(&'a self, out: &mut ::std::vec::Vec<&'a rt::Term>) {
        for c in &self.children {
            c.errors(out);
        }
        rt::extras_errors(&self.extras, out);
    }
}

/// `pair`
#[derive(Debug, Clone, PartialEq)]
pub struct Pair {
    pub ann: rt::SourceSpan,
    pub key: rt::Checked<PairKey>,
    pub value: rt::Checked<Value>,
    pub extras: ::std::vec::Vec<rt::Term>,
}

impl rt::FromTerm for Pair {
    fn accepts(kind: &str) -> bool {
        kind == "pair"
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        let mut extras = rt::undeclared_fields(term, &["key", "value"]);
        let key = rt::one::<PairKey>(&rt::field(term, "key"))?;
        let value = rt::one::<Value>(&rt::field(term, "value"))?;
        extras.extend(term.children.iter().cloned());
        ::std::option::Option::Some(Self {
            ann: term.span,
            key,
            value,
            extras,
        })
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        out.push(self.ann);
        self.key.spans(out);
        self.value.spans(out);
        rt::extras_spans(&self.extras, out);
    }

    fn errors<'a>(&'a self, out: &mut ::std::vec::Vec<&'a rt::Term>) {
        self.key.errors(out);
        self.value.errors(out);
        rt::extras_errors(&self.extras, out);
    }
}

/// One of `number`, `string`.
#[derive(Debug, Clone, PartialEq)]
pub enum PairKey {
    Number(::std::boxed::Box<Number>),
    String(::std::boxed::Box<String>),
}

impl rt::FromTerm for PairKey {
    fn accepts(kind: &str) -> bool {
        <Number as rt::FromTerm>::accepts(kind)
            || <String as rt::FromTerm>::accepts(kind)
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        let kind = term.kind.as_str();
        if <Number as rt::FromTerm>::accepts(kind) {
            return <Number as rt::FromTerm>::from_term(term).map(|v| Self::Number(::std::boxed::Box::new(v)));
        }
        if <String as rt::FromTerm>::accepts(kind) {
            return <String as rt::FromTerm>::from_term(term).map(|v| Self::String(::std::boxed::Box::new(v)));
        }
        ::std::option::Option::None
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        match self {
            Self::Number(v) => rt::FromTerm::spans(v.as_ref(), out),
            Self::String(v) => rt::FromTerm::spans(v.as_ref(), out),
        }
    }

    fn errors<'a>(&'a self, out: &mut ::std::vec::Vec<&'a rt::Term>) {
        match self {
            Self::Number(v) => rt::FromTerm::errors(v.as_ref(), out),
            Self::String(v) => rt::FromTerm::errors(v.as_ref(), out),
        }
    }
}

/// `string`
#[derive(Debug, Clone, PartialEq)]
pub struct String {
    pub ann: rt::SourceSpan,
    pub children: ::std::vec::Vec<rt::Checked<StringChildren>>,
    pub extras: ::std::vec::Vec<rt::Term>,
}

impl rt::FromTerm for String {
    fn accepts(kind: &str) -> bool {
        kind == "string"
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        let mut extras = rt::undeclared_fields(term, &[]);
        let slot = rt::split_children(term, <StringChildren as rt::FromTerm>::accepts, &mut extras);
        let children = rt::many::<StringChildren>(&slot);
        ::std::option::Option::Some(Self {
            ann: term.span,
            children,
            extras,
        })
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        out.push(self.ann);
        for c in &self.children {
            c.spans(out);
        }
        rt::extras_spans(&self.extras, out);
    }

    fn errors<'a>(&'a self, out: &mut ::std::vec::Vec<&'a rt::Term>) {
        for c in &self.children {
            c.errors(out);
        }
        rt::extras_errors(&self.extras, out);
    }
}

/// One of `escape_sequence`, `string_content`.
#[derive(Debug, Clone, PartialEq)]
pub enum StringChildren {
    EscapeSequence(::std::boxed::Box<EscapeSequence>),
    StringContent(::std::boxed::Box<StringContent>),
}

impl rt::FromTerm for StringChildren {
    fn accepts(kind: &str) -> bool {
        <EscapeSequence as rt::FromTerm>::accepts(kind)
            || <StringContent as rt::FromTerm>::accepts(kind)
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        let kind = term.kind.as_str();
        if <EscapeSequence as rt::FromTerm>::accepts(kind) {
            return <EscapeSequence as rt::FromTerm>::from_term(term).map(|v| Self::EscapeSequence(::std::boxed::Box::new(v)));
        }
        if <StringContent as rt::FromTerm>::accepts(kind) {
            return <StringContent as rt::FromTerm>::from_term(term).map(|v| Self::StringContent(::std::boxed::Box::new(v)));
        }
        ::std::option::Option::None
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        match self {
            Self::EscapeSequence(v) => rt::FromTerm::spans(v.as_ref(), out),
            Self::StringContent(v) => rt::FromTerm::spans(v.as_ref(), out),
        }
    }

    fn errors<'a>(&'a self, out: &mut ::std::vec::Vec<&'a rt::Term>) {
        match self {
            Self::EscapeSequence(v) => rt::FromTerm::errors(v.as_ref(), out),
            Self::StringContent(v) => rt::FromTerm::errors(v.as_ref(), out),
        }
    }
}

/// `comment`
#[derive(Debug, Clone, PartialEq)]
pub struct Comment {
    pub ann: rt::SourceSpan,
    pub text: ::std::string::String,
    pub extras: ::std::vec::Vec<rt::Term>,
}

impl rt::FromTerm for Comment {
    fn accepts(kind: &str) -> bool {
        kind == "comment"
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        ::std::option::Option::Some(Self {
            ann: term.span,
            text: term.source_text(),
            extras: term.subterms().cloned().collect(),
        })
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        out.push(self.ann);
        rt::extras_spans(&self.extras, out);
    }

    fn errors<'a>(&'a self, _out: &mut ::std::vec::Vec<&'a rt::Term>) {}
}

/// `escape_sequence`
#[derive(Debug, Clone, PartialEq)]
pub struct EscapeSequence {
    pub ann: rt::SourceSpan,
    pub text: ::std::string::String,
    pub extras: ::std::vec::Vec<rt::Term>,
}

impl rt::FromTerm for EscapeSequence {
    fn accepts(kind: &str) -> bool {
        kind == "escape_sequence"
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        ::std::option::Option::Some(Self {
            ann: term.span,
            text: term.source_text(),
            extras: term.subterms().cloned().collect(),
        })
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        out.push(self.ann);
        rt::extras_spans(&self.extras, out);
    }

    fn errors<'a>(&'a self, _out: &mut ::std::vec::Vec<&'a rt::Term>) {}
}

/// `false`
#[derive(Debug, Clone, PartialEq)]
pub struct False {
    pub ann: rt::SourceSpan,
    pub text: ::std::string::String,
    pub extras: ::std::vec::Vec<rt::Term>,
}

impl rt::FromTerm for False {
    fn accepts(kind: &str) -> bool {
        kind == "false"
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        ::std::option::Option::Some(Self {
            ann: term.span,
            text: term.source_text(),
            extras: term.subterms().cloned().collect(),
        })
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        out.push(self.ann);
        rt::extras_spans(&self.extras, out);
    }

    fn errors<'a>(&'a self, _out: &mut ::std::vec::Vec<&'a rt::Term>) {}
}

/// `null`
#[derive(Debug, Clone, PartialEq)]
pub struct Null {
    pub ann: rt::SourceSpan,
    pub text: ::std::string::String,
    pub extras: ::std::vec::Vec<rt::Term>,
}

impl rt::FromTerm for Null {
    fn accepts(kind: &str) -> bool {
        kind == "null"
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        ::std::option::Option::Some(Self {
            ann: term.span,
            text: term.source_text(),
            extras: term.subterms().cloned().collect(),
        })
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        out.push(self.ann);
        rt::extras_spans(&self.extras, out);
    }

    fn errors<'a>(&'a self, _out: &mut ::std::vec::Vec<&'a rt::Term>) {}
}

/// `number`
#[derive(Debug, Clone, PartialEq)]
pub struct Number {
    pub ann: rt::SourceSpan,
    pub text: ::std::string::String,
    pub extras: ::std::vec::Vec<rt::Term>,
}

impl rt::FromTerm for Number {
    fn accepts(kind: &str) -> bool {
        kind == "number"
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        ::std::option::Option::Some(Self {
            ann: term.span,
            text: term.source_text(),
            extras: term.subterms().cloned().collect(),
        })
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        out.push(self.ann);
        rt::extras_spans(&self.extras, out);
    }

    fn errors<'a>(&'a self, _out: &mut ::std::vec::Vec<&'a rt::Term>) {}
}

/// `string_content`
#[derive(Debug, Clone, PartialEq)]
pub struct StringContent {
    pub ann: rt::SourceSpan,
    pub text: ::std::string::String,
    pub extras: ::std::vec::Vec<rt::Term>,
}

impl rt::FromTerm for StringContent {
    fn accepts(kind: &str) -> bool {
        kind == "string_content"
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        ::std::option::Option::Some(Self {
            ann: term.span,
            text: term.source_text(),
            extras: term.subterms().cloned().collect(),
        })
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        out.push(self.ann);
        rt::extras_spans(&self.extras, out);
    }

    fn errors<'a>(&'a self, _out: &mut ::std::vec::Vec<&'a rt::Term>) {}
}

/// `true`
#[derive(Debug, Clone, PartialEq)]
pub struct True {
    pub ann: rt::SourceSpan,
    pub text: ::std::string::String,
    pub extras: ::std::vec::Vec<rt::Term>,
}

impl rt::FromTerm for True {
    fn accepts(kind: &str) -> bool {
        kind == "true"
    }

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {
        ::std::option::Option::Some(Self {
            ann: term.span,
            text: term.source_text(),
            extras: term.subterms().cloned().collect(),
        })
    }

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {
        out.push(self.ann);
        rt::extras_spans(&self.extras, out);
    }

    fn errors<'a>(&'a self, _out: &mut ::std::vec::Vec<&'a rt::Term>) {}
}
