//! Bigraphical signatures and the SMC theory they induce.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;

/// A node type with its binding and free arities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Control {
    pub name: String,
    pub binding: usize,
    pub free: usize,
    pub atomic: bool,
}

impl Control {
    pub fn new(name: impl Into<String>, binding: usize, free: usize, atomic: bool) -> Self {
        Control { name: name.into(), binding, free, atomic }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BigSignature {
    pub controls: Vec<Control>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("duplicate control `{0}`")]
    DuplicateControl(String),
    #[error("control name must be nonempty")]
    EmptyControlName,
    #[error("control name `{0}` is reserved for a structural operation")]
    ReservedControlName(String),
}

impl BigSignature {
    pub fn new(controls: Vec<Control>) -> Result<Self, SignatureError> {
        let s = BigSignature { controls };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), SignatureError> {
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.controls {
            if c.name.is_empty() {
                return Err(SignatureError::EmptyControlName);
            }
            if StructuralKind::ALL.iter().any(|k| k.op_name() == c.name) {
                return Err(SignatureError::ReservedControlName(c.name.clone()));
            }
            if !seen.insert(c.name.as_str()) {
                return Err(SignatureError::DuplicateControl(c.name.clone()));
            }
        }
        Ok(())
    }

    pub fn control(&self, name: &str) -> Option<&Control> {
        self.controls.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StructuralKind {
    /// `| : t ⊗ t → t`
    Par,
    /// `0 : I → t`
    Zero,
    /// `ν : I → v`
    Nu,
    /// `c : v → v ⊗ v`
    Contract,
    /// `w : v → I`
    Weaken,
}

impl StructuralKind {
    pub const ALL: [StructuralKind; 5] = [
        StructuralKind::Par,
        StructuralKind::Zero,
        StructuralKind::Nu,
        StructuralKind::Contract,
        StructuralKind::Weaken,
    ];

    pub fn op_name(self) -> &'static str {
        match self {
            StructuralKind::Par => "par",
            StructuralKind::Zero => "zero",
            StructuralKind::Nu => "nu",
            StructuralKind::Contract => "contract",
            StructuralKind::Weaken => "weaken",
        }
    }

    pub fn operation(self) -> SmcOperation {
        let (dom, cod) = match self {
            StructuralKind::Par => (Formula::tensor(Formula::t(), Formula::t()), Formula::t()),
            StructuralKind::Zero => (Formula::Unit, Formula::t()),
            StructuralKind::Nu => (Formula::Unit, Formula::v()),
            StructuralKind::Contract => (Formula::v(), Formula::tensor(Formula::v(), Formula::v())),
            StructuralKind::Weaken => (Formula::v(), Formula::Unit),
        };
        SmcOperation { name: self.op_name().to_string(), dom, cod, kind: OpKind::Structural(self) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    Structural(StructuralKind),
    Logical(Control),
}

/// A typed generator `dom → cod` of the SMC signature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SmcOperation {
    pub name: String,
    pub dom: Formula,
    pub cod: Formula,
    pub kind: OpKind,
}

impl SmcOperation {
    pub fn structural(&self) -> Option<StructuralKind> {
        match self.kind {
            OpKind::Structural(k) => Some(k),
            OpKind::Logical(_) => None,
        }
    }

    pub fn control(&self) -> Option<&Control> {
        match &self.kind {
            OpKind::Logical(c) => Some(c),
            OpKind::Structural(_) => None,
        }
    }

    pub fn is_nu(&self) -> bool {
        self.structural() == Some(StructuralKind::Nu)
    }

    /// Logical cells and ν survive normalization.
    pub fn is_kept_in_normal_form(&self) -> bool {
        matches!(self.kind, OpKind::Logical(_) | OpKind::Structural(StructuralKind::Nu))
    }
}

impl fmt::Display for SmcOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} -> {}", self.name, self.dom, self.cod)
    }
}

/// `K_k : (v^{⊗B} ⊸ x) ⊗ v^{⊗F} → t` with `x = I` for atomic controls.
pub fn control_operation(k: &Control) -> SmcOperation {
    let inner = if k.atomic { Formula::Unit } else { Formula::t() };
    let dom = Formula::tensor(Formula::lolli(Formula::v_power(k.binding), inner), Formula::v_power(k.free));
    SmcOperation { name: k.name.clone(), dom, cod: Formula::t(), kind: OpKind::Logical(k.clone()) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EquationSchema {
    /// `(t, |, 0)` is a commutative monoid.
    CommutativeMonoid,
    /// `(v, c, w)` is a cocommutative comonoid.
    CocommutativeComonoid,
    /// `ν ; w = id_I`.
    NuWeakenAnnihilation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryTK {
    signature: BigSignature,
    operations: BTreeMap<String, SmcOperation>,
}

impl TheoryTK {
    pub fn derive(sig: &BigSignature) -> Result<Self, SignatureError> {
        sig.validate()?;
        let mut operations = BTreeMap::new();
        for k in StructuralKind::ALL {
            let op = k.operation();
            operations.insert(op.name.clone(), op);
        }
        for c in &sig.controls {
            let op = control_operation(c);
            operations.insert(op.name.clone(), op);
        }
        Ok(TheoryTK { signature: sig.clone(), operations })
    }

    pub fn signature(&self) -> &BigSignature {
        &self.signature
    }

    pub fn operations(&self) -> impl Iterator<Item = &SmcOperation> {
        self.operations.values()
    }

    pub fn operation(&self, name: &str) -> Option<&SmcOperation> {
        self.operations.get(name)
    }

    pub fn structural(&self, k: StructuralKind) -> &SmcOperation {
        &self.operations[k.op_name()]
    }

    pub fn contains(&self, op: &SmcOperation) -> bool {
        self.operations.get(&op.name) == Some(op)
    }

    pub fn equations(&self) -> &'static [EquationSchema] {
        &[
            EquationSchema::CommutativeMonoid,
            EquationSchema::CocommutativeComonoid,
            EquationSchema::NuWeakenAnnihilation,
        ]
    }
}
