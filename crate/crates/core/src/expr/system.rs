use std::fmt;
use std::ops::Add;

use super::{Expr, ExprError, MultiIndex};

/// Grassmann parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^{[a][b]}` as a boolean "negate" flag.
    pub fn koszul(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        Parity::from_odd(self.is_odd() != rhs.is_odd())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldRole {
    Dynamic,
    Ghost,
    Parameter,
}

/// Index of a field in its [`FieldSystem`]; declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldId(pub u16);

impl FieldId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A field component `s^A`: a field together with a flattened fiber index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    pub field: FieldId,
    pub fiber: u32,
}

/// A jet coordinate `s^A_Λ`.
///
/// The derived order (field, fiber, multi-index) is the global canonical
/// variable order; `parity` is determined by `field` and never breaks a tie.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetVar {
    pub field: FieldId,
    pub fiber: u32,
    pub multi_index: MultiIndex,
    pub parity: Parity,
}

impl JetVar {
    pub fn component(&self) -> Component {
        Component {
            field: self.field,
            fiber: self.fiber,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity.is_odd()
    }

    /// `s^A_{λ+Λ}`.
    pub fn raised(&self, direction: usize) -> JetVar {
        JetVar {
            multi_index: self.multi_index.raised(direction),
            ..self.clone()
        }
    }

    pub fn with_multi_index(&self, multi_index: MultiIndex) -> JetVar {
        JetVar {
            multi_index,
            ..self.clone()
        }
    }

    pub fn order(&self) -> usize {
        self.multi_index.order()
    }
}

impl fmt::Debug for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "v{}[{}]{:?}",
            self.field.0, self.fiber, self.multi_index
        )?;
        if self.is_odd() {
            f.write_str("'")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDecl {
    pub name: String,
    /// Fiber shape; components are indexed by tuples flattened row-major.
    pub shape: Vec<usize>,
    pub parity: Parity,
    pub role: FieldRole,
    /// For ghosts: the parameter field this ghost replaces.
    pub ghost_for: Option<FieldId>,
}

impl FieldDecl {
    pub fn fiber_size(&self) -> usize {
        self.shape.iter().product()
    }
}

/// Grading of an expression: `None` in a slot means the monomials disagree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grading {
    pub parity: Option<Parity>,
    pub ghost_degree: Option<u32>,
}

impl Grading {
    pub fn is_mixed(&self) -> bool {
        self.parity.is_none() || self.ghost_degree.is_none()
    }
}

/// Catalog of the base dimension and declared fields; fixes the chart and
/// the canonical variable order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSystem {
    base_dim: usize,
    fields: Vec<FieldDecl>,
}

impl FieldSystem {
    pub fn new(base_dim: usize) -> Result<Self, ExprError> {
        if base_dim == 0 {
            return Err(ExprError::InvalidBaseDim);
        }
        Ok(FieldSystem {
            base_dim,
            fields: Vec::new(),
        })
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    /// Declares a field. Ghosts must be odd and parameters even.
    pub fn declare(&mut self, decl: FieldDecl) -> Result<FieldId, ExprError> {
        if self.fields.iter().any(|f| f.name == decl.name) {
            return Err(ExprError::DuplicateField(decl.name));
        }
        if decl.shape.is_empty() || decl.shape.contains(&0) {
            return Err(ExprError::InvalidShape(decl.name));
        }
        match (decl.role, decl.parity) {
            (FieldRole::Ghost, Parity::Even) | (FieldRole::Parameter, Parity::Odd) => {
                return Err(ExprError::RoleParity {
                    field: decl.name,
                    role: decl.role,
                });
            }
            _ => {}
        }
        if let Some(param) = decl.ghost_for {
            let ok = decl.role == FieldRole::Ghost
                && self
                    .fields
                    .get(param.index())
                    .is_some_and(|p| p.role == FieldRole::Parameter && p.fiber_size() == decl.fiber_size())
                && !self.fields.iter().any(|f| f.ghost_for == Some(param));
            if !ok {
                return Err(ExprError::InvalidGhostPairing(decl.name));
            }
        }
        if self.fields.len() >= u16::MAX as usize {
            return Err(ExprError::TooManyFields);
        }
        self.fields.push(decl);
        Ok(FieldId((self.fields.len() - 1) as u16))
    }

    pub fn add_dynamic(&mut self, name: &str, shape: &[usize], parity: Parity) -> Result<FieldId, ExprError> {
        self.declare(FieldDecl {
            name: name.to_string(),
            shape: shape.to_vec(),
            parity,
            role: FieldRole::Dynamic,
            ghost_for: None,
        })
    }

    pub fn add_parameter(&mut self, name: &str, shape: &[usize]) -> Result<FieldId, ExprError> {
        self.declare(FieldDecl {
            name: name.to_string(),
            shape: shape.to_vec(),
            parity: Parity::Even,
            role: FieldRole::Parameter,
            ghost_for: None,
        })
    }

    pub fn add_ghost(&mut self, name: &str, shape: &[usize], ghost_for: Option<FieldId>) -> Result<FieldId, ExprError> {
        self.declare(FieldDecl {
            name: name.to_string(),
            shape: shape.to_vec(),
            parity: Parity::Odd,
            role: FieldRole::Ghost,
            ghost_for,
        })
    }

    pub fn field(&self, id: FieldId) -> &FieldDecl {
        &self.fields[id.index()]
    }

    pub fn fields(&self) -> impl Iterator<Item = (FieldId, &FieldDecl)> + '_ {
        self.fields
            .iter()
            .enumerate()
            .map(|(i, f)| (FieldId(i as u16), f))
    }

    pub fn field_by_name(&self, name: &str) -> Option<FieldId> {
        self.fields
            .iter()
            .position(|f| f.name == name)
            .map(|i| FieldId(i as u16))
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn role(&self, field: FieldId) -> FieldRole {
        self.field(field).role
    }

    pub fn component_parity(&self, c: Component) -> Parity {
        self.field(c.field).parity
    }

    /// All components of all fields, in canonical order.
    pub fn components(&self) -> Vec<Component> {
        self.fields()
            .flat_map(|(id, f)| {
                (0..f.fiber_size() as u32).map(move |fiber| Component { field: id, fiber })
            })
            .collect()
    }

    pub fn components_with_role(&self, role: FieldRole) -> Vec<Component> {
        self.components()
            .into_iter()
            .filter(|c| self.role(c.field) == role)
            .collect()
    }

    /// Flattens a zero-based fiber tuple.
    pub fn flat_fiber(&self, field: FieldId, tuple: &[usize]) -> Result<u32, ExprError> {
        let decl = self.field(field);
        if tuple.len() != decl.shape.len() || tuple.iter().zip(&decl.shape).any(|(t, s)| t >= s) {
            return Err(ExprError::FiberOutOfRange {
                field: decl.name.clone(),
                index: tuple.to_vec(),
            });
        }
        let mut flat = 0usize;
        for (t, s) in tuple.iter().zip(&decl.shape) {
            flat = flat * s + t;
        }
        Ok(flat as u32)
    }

    /// Inverse of [`FieldSystem::flat_fiber`].
    pub fn fiber_tuple(&self, field: FieldId, fiber: u32) -> Vec<usize> {
        let shape = &self.field(field).shape;
        let mut rest = fiber as usize;
        let mut out = vec![0; shape.len()];
        for (slot, s) in out.iter_mut().zip(shape).rev() {
            *slot = rest % s;
            rest /= s;
        }
        out
    }

    pub fn component(&self, field: FieldId, tuple: &[usize]) -> Result<Component, ExprError> {
        Ok(Component {
            field,
            fiber: self.flat_fiber(field, tuple)?,
        })
    }

    pub fn jet_var(&self, c: Component, multi_index: MultiIndex) -> Result<JetVar, ExprError> {
        let decl = self
            .fields
            .get(c.field.index())
            .ok_or(ExprError::UnknownField(c.field.0))?;
        if c.fiber as usize >= decl.fiber_size() {
            return Err(ExprError::FiberOutOfRange {
                field: decl.name.clone(),
                index: vec![c.fiber as usize],
            });
        }
        if multi_index.dim() != self.base_dim {
            return Err(ExprError::BaseDimMismatch {
                expected: self.base_dim,
                found: multi_index.dim(),
            });
        }
        Ok(JetVar {
            field: c.field,
            fiber: c.fiber,
            multi_index,
            parity: decl.parity,
        })
    }

    /// `s^A` with the empty multi-index.
    pub fn base_var(&self, c: Component) -> Result<JetVar, ExprError> {
        self.jet_var(c, MultiIndex::zero(self.base_dim))
    }

    /// Expression for the jet variable of `field` at zero-based `tuple` with
    /// zero-based jet `directions`.
    pub fn var_expr(&self, field: FieldId, tuple: &[usize], directions: &[usize]) -> Result<Expr, ExprError> {
        let c = self.component(field, tuple)?;
        let mi = MultiIndex::from_entries(self.base_dim, directions).ok_or(ExprError::BaseDimMismatch {
            expected: self.base_dim,
            found: directions.iter().max().map_or(0, |m| m + 1),
        })?;
        Ok(Expr::var(self.jet_var(c, mi)?))
    }

    /// The ghost field replacing `param`: an explicit `ghost_for` pairing, or
    /// else the unpaired ghost at the same position among unpaired ghosts as
    /// `param` among unpaired parameters, if fiber sizes agree.
    pub fn ghost_for_parameter(&self, param: FieldId) -> Option<FieldId> {
        if let Some((id, _)) = self.fields().find(|(_, f)| f.ghost_for == Some(param)) {
            return Some(id);
        }
        let explicitly_paired: Vec<FieldId> = self.fields.iter().filter_map(|f| f.ghost_for).collect();
        let unpaired_params: Vec<FieldId> = self
            .fields()
            .filter(|(id, f)| f.role == FieldRole::Parameter && !explicitly_paired.contains(id))
            .map(|(id, _)| id)
            .collect();
        let unpaired_ghosts: Vec<FieldId> = self
            .fields()
            .filter(|(_, f)| f.role == FieldRole::Ghost && f.ghost_for.is_none())
            .map(|(id, _)| id)
            .collect();
        let pos = unpaired_params.iter().position(|&p| p == param)?;
        let ghost = *unpaired_ghosts.get(pos)?;
        (self.field(ghost).fiber_size() == self.field(param).fiber_size()).then_some(ghost)
    }

    /// Checks that every variable of `e` is a coordinate of this system.
    pub fn validate(&self, e: &Expr) -> Result<(), ExprError> {
        for (m, _) in e.terms() {
            if m.base_exponents().len() > self.base_dim {
                return Err(ExprError::BaseDimMismatch {
                    expected: self.base_dim,
                    found: m.base_exponents().len(),
                });
            }
            for v in m.variables() {
                let checked = self.jet_var(v.component(), v.multi_index.clone())?;
                if checked.parity != v.parity {
                    return Err(ExprError::ForeignVariable(format!("{v:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn mul(&self, a: &Expr, b: &Expr) -> Result<Expr, ExprError> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(a * b)
    }

    pub fn add(&self, a: &Expr, b: &Expr) -> Result<Expr, ExprError> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(a + b)
    }

    /// Ghost degree of a single monomial: its number of ghost-field factors.
    pub fn ghost_degree_of(&self, m: &super::Monomial) -> u32 {
        m.odd_part()
            .iter()
            .filter(|v| self.role(v.field) == FieldRole::Ghost)
            .count() as u32
    }

    /// Parity and ghost degree shared by all monomials. The zero expression
    /// reports `{even, 0}`.
    pub fn grading(&self, e: &Expr) -> Grading {
        let mut parity = None;
        let mut ghost = None;
        let mut parity_mixed = false;
        let mut ghost_mixed = false;
        for (m, _) in e.terms() {
            let p = m.parity();
            let g = self.ghost_degree_of(m);
            match parity {
                None => parity = Some(p),
                Some(q) if q != p => parity_mixed = true,
                _ => {}
            }
            match ghost {
                None => ghost = Some(g),
                Some(h) if h != g => ghost_mixed = true,
                _ => {}
            }
        }
        Grading {
            parity: if parity_mixed { None } else { Some(parity.unwrap_or(Parity::Even)) },
            ghost_degree: if ghost_mixed { None } else { Some(ghost.unwrap_or(0)) },
        }
    }
}
