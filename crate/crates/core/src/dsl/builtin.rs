use super::document::{Definition, ModelDocument};
use crate::expr::Rational;
use crate::models::{
    connection_generator, yang_mills_brst_with_coefficient, yang_mills_lagrangian, ConnectionModel, ModelError,
};

/// The Yang–Mills model as a document: algebra `g`, Lagrangian `L` (when
/// the algebra has a metric), gauge generator `G` and BRST candidate `S`.
pub fn yang_mills_document(model: &ConnectionModel) -> Result<ModelDocument, ModelError> {
    yang_mills_document_with_coefficient(model, &Rational::new((-1).into(), 2.into()))
}

/// As [`yang_mills_document`] with `k` in place of `-1/2` in `s c^r`.
pub fn yang_mills_document_with_coefficient(model: &ConnectionModel, k: &Rational) -> Result<ModelDocument, ModelError> {
    let ms = model.build()?;
    let mut doc = ModelDocument::new(ms.system.clone());
    doc.push("g", Definition::Algebra(model.algebra.clone()));
    if model.algebra.metric().is_some() {
        doc.push("L", Definition::Lagrangian(yang_mills_lagrangian(&ms)?));
    }
    doc.push("G", Definition::Gauge(connection_generator(&ms)));
    doc.push("S", Definition::Brst(yang_mills_brst_with_coefficient(&ms, k)?));
    Ok(doc)
}
