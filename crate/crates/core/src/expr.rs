//! Expression DAGs over coordinate atoms.
//!
//! Cluster variables, exchange-relation sides, and every identity to be
//! certified are held as shared immutable DAGs. Nothing is ever expanded
//! symbolically: a node is re-evaluated exactly (over scalars or dual
//! numbers) at whatever sample point a check supplies. Determinants are
//! first-class nodes so a 20x20 minor evaluates through exact elimination
//! instead of a symbolic expansion.

use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::fmt;

use crate::dual::{det_dual, DualScalar};
use crate::matrix::{MatError, Matrix};
use crate::scalar::{Field, Ring, Scalar};

pub enum Node {
    Const(Scalar),
    Atom(usize),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Neg(Expr),
    Pow(Expr, i64),
    Det(Matrix<Expr>),
}

#[derive(Clone)]
pub struct Expr(Rc<Node>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalError {
    DivByZero,
    AtomOutOfRange,
    BadDet,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DivByZero => write!(f, "division by zero during evaluation"),
            EvalError::AtomOutOfRange => write!(f, "atom index outside the sample point"),
            EvalError::BadDet => write!(f, "determinant of a non-square node"),
        }
    }
}

/// Values an expression can be evaluated into.
pub trait EvalValue: Field {
    fn det(m: &Matrix<Self>) -> Result<Self, MatError>;
}

impl EvalValue for Scalar {
    fn det(m: &Matrix<Scalar>) -> Result<Scalar, MatError> {
        m.det()
    }
}

impl EvalValue for DualScalar {
    fn det(m: &Matrix<DualScalar>) -> Result<DualScalar, MatError> {
        det_dual(m)
    }
}

impl Expr {
    fn new(n: Node) -> Expr {
        Expr(Rc::new(n))
    }

    fn key(&self) -> usize {
        Rc::as_ptr(&self.0) as usize
    }

    pub fn constant(c: Scalar) -> Expr {
        Expr::new(Node::Const(c))
    }

    pub fn int(v: i64) -> Expr {
        Expr::constant(Scalar::from_int(v))
    }

    pub fn atom(idx: usize) -> Expr {
        Expr::new(Node::Atom(idx))
    }

    pub fn det(m: Matrix<Expr>) -> Expr {
        Expr::new(Node::Det(m))
    }

    fn as_const(&self) -> Option<&Scalar> {
        match &*self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn add(&self, o: &Expr) -> Expr {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a + b),
            (Some(a), _) if a.is_zero() => o.clone(),
            (_, Some(b)) if b.is_zero() => self.clone(),
            _ => Expr::new(Node::Add(self.clone(), o.clone())),
        }
    }

    pub fn sub(&self, o: &Expr) -> Expr {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a - b),
            (_, Some(b)) if b.is_zero() => self.clone(),
            _ => Expr::new(Node::Sub(self.clone(), o.clone())),
        }
    }

    pub fn mul(&self, o: &Expr) -> Expr {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a * b),
            (Some(a), _) if a.is_zero() => Expr::int(0),
            (_, Some(b)) if b.is_zero() => Expr::int(0),
            (Some(a), _) if a.is_one() => o.clone(),
            (_, Some(b)) if b.is_one() => self.clone(),
            _ => Expr::new(Node::Mul(self.clone(), o.clone())),
        }
    }

    pub fn div(&self, o: &Expr) -> Expr {
        if let Some(b) = o.as_const() {
            if b.is_one() {
                return self.clone();
            }
            if !b.is_zero() {
                return self.mul(&Expr::constant(b.inv().unwrap()));
            }
        }
        Expr::new(Node::Div(self.clone(), o.clone()))
    }

    pub fn neg(&self) -> Expr {
        match self.as_const() {
            Some(a) => Expr::constant(-a.clone()),
            None => Expr::new(Node::Neg(self.clone())),
        }
    }

    pub fn pow(&self, e: i64) -> Expr {
        match e {
            0 => Expr::int(1),
            1 => self.clone(),
            _ => Expr::new(Node::Pow(self.clone(), e)),
        }
    }

    pub fn scale_by(&self, c: &Scalar) -> Expr {
        self.mul(&Expr::constant(c.clone()))
    }

    /// Product of a list of factors (empty product is 1).
    pub fn product(factors: &[Expr]) -> Expr {
        let mut acc = Expr::int(1);
        for f in factors {
            acc = acc.mul(f);
        }
        acc
    }

    pub fn sum(terms: &[Expr]) -> Expr {
        let mut acc = Expr::int(0);
        for t in terms {
            acc = acc.add(t);
        }
        acc
    }

    /// Exact evaluation at a sample point, memoized across the shared DAG.
    pub fn eval<T: EvalValue>(&self, atoms: &[T]) -> Result<T, EvalError> {
        let mut memo: BTreeMap<usize, T> = BTreeMap::new();
        self.eval_memo(atoms, &mut memo)
    }

    pub fn eval_memo<T: EvalValue>(
        &self,
        atoms: &[T],
        memo: &mut BTreeMap<usize, T>,
    ) -> Result<T, EvalError> {
        if let Some(v) = memo.get(&self.key()) {
            return Ok(v.clone());
        }
        let v: T = match &*self.0 {
            Node::Const(c) => T::from_scalar(c),
            Node::Atom(i) => atoms.get(*i).cloned().ok_or(EvalError::AtomOutOfRange)?,
            Node::Add(a, b) => a.eval_memo(atoms, memo)?.add(&b.eval_memo(atoms, memo)?),
            Node::Sub(a, b) => a.eval_memo(atoms, memo)?.sub(&b.eval_memo(atoms, memo)?),
            Node::Mul(a, b) => a.eval_memo(atoms, memo)?.mul(&b.eval_memo(atoms, memo)?),
            Node::Div(a, b) => {
                let den = b.eval_memo(atoms, memo)?;
                let num = a.eval_memo(atoms, memo)?;
                num.div(&den).ok_or(EvalError::DivByZero)?
            }
            Node::Neg(a) => a.eval_memo(atoms, memo)?.neg(),
            Node::Pow(a, e) => {
                let base = a.eval_memo(atoms, memo)?;
                let mag = e.unsigned_abs() as usize;
                let mut acc = T::one();
                for _ in 0..mag {
                    acc = acc.mul(&base);
                }
                if *e < 0 {
                    acc.inv().ok_or(EvalError::DivByZero)?
                } else {
                    acc
                }
            }
            Node::Det(m) => {
                if !m.is_square() {
                    return Err(EvalError::BadDet);
                }
                let mut vals = Vec::with_capacity(m.rows() * m.cols());
                for i in 1..=m.rows() {
                    for j in 1..=m.cols() {
                        vals.push(m.at(i, j).eval_memo(atoms, memo)?);
                    }
                }
                let mm = Matrix::from_fn(m.rows(), m.cols(), |i, j| {
                    vals[(i - 1) * m.cols() + (j - 1)].clone()
                });
                T::det(&mm).map_err(|_| EvalError::BadDet)?
            }
        };
        memo.insert(self.key(), v.clone());
        Ok(v)
    }

    /// Replace every atom via `f`, preserving sharing.
    pub fn substitute(&self, f: &impl Fn(usize) -> Expr) -> Expr {
        let mut memo: BTreeMap<usize, Expr> = BTreeMap::new();
        self.subst_memo(f, &mut memo)
    }

    fn subst_memo(&self, f: &impl Fn(usize) -> Expr, memo: &mut BTreeMap<usize, Expr>) -> Expr {
        if let Some(e) = memo.get(&self.key()) {
            return e.clone();
        }
        let out = match &*self.0 {
            Node::Const(c) => Expr::constant(c.clone()),
            Node::Atom(i) => f(*i),
            Node::Add(a, b) => a.subst_memo(f, memo).add(&b.subst_memo(f, memo)),
            Node::Sub(a, b) => a.subst_memo(f, memo).sub(&b.subst_memo(f, memo)),
            Node::Mul(a, b) => a.subst_memo(f, memo).mul(&b.subst_memo(f, memo)),
            Node::Div(a, b) => a.subst_memo(f, memo).div(&b.subst_memo(f, memo)),
            Node::Neg(a) => a.subst_memo(f, memo).neg(),
            Node::Pow(a, e) => a.subst_memo(f, memo).pow(*e),
            Node::Det(m) => {
                let mm = Matrix::from_fn(m.rows(), m.cols(), |i, j| {
                    m.at(i, j).subst_memo(f, memo)
                });
                Expr::det(mm)
            }
        };
        memo.insert(self.key(), out.clone());
        out
    }

    /// `(numerator degree, denominator degree)` upper bounds in the atoms,
    /// for Schwartz-Zippel failure-probability bookkeeping.
    pub fn degree_bound(&self) -> (u64, u64) {
        let mut memo: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
        self.deg_memo(&mut memo)
    }

    fn deg_memo(&self, memo: &mut BTreeMap<usize, (u64, u64)>) -> (u64, u64) {
        if let Some(d) = memo.get(&self.key()) {
            return *d;
        }
        let d = match &*self.0 {
            Node::Const(_) => (0, 0),
            Node::Atom(_) => (1, 0),
            Node::Add(a, b) | Node::Sub(a, b) => {
                let (n1, d1) = a.deg_memo(memo);
                let (n2, d2) = b.deg_memo(memo);
                ((n1 + d2).max(n2 + d1), d1 + d2)
            }
            Node::Mul(a, b) => {
                let (n1, d1) = a.deg_memo(memo);
                let (n2, d2) = b.deg_memo(memo);
                (n1 + n2, d1 + d2)
            }
            Node::Div(a, b) => {
                let (n1, d1) = a.deg_memo(memo);
                let (n2, d2) = b.deg_memo(memo);
                (n1 + d2, d1 + n2)
            }
            Node::Neg(a) => a.deg_memo(memo),
            Node::Pow(a, e) => {
                let (n1, d1) = a.deg_memo(memo);
                let m = e.unsigned_abs();
                if *e >= 0 {
                    (n1 * m, d1 * m)
                } else {
                    (d1 * m, n1 * m)
                }
            }
            Node::Det(m) => {
                let mut num = 0u64;
                let mut den = 0u64;
                for i in 1..=m.rows() {
                    let row_max = (1..=m.cols())
                        .map(|j| m.at(i, j).deg_memo(memo))
                        .fold((0, 0), |acc, d| (acc.0.max(d.0 + d.1), acc.1.max(d.1)));
                    num += row_max.0;
                    den += row_max.1;
                }
                (num, den)
            }
        };
        memo.insert(self.key(), d);
        d
    }
}

impl Ring for Expr {
    fn zero() -> Self {
        Expr::int(0)
    }
    fn one() -> Self {
        Expr::int(1)
    }
    fn is_zero(&self) -> bool {
        matches!(self.as_const(), Some(c) if c.is_zero())
    }
    fn add(&self, o: &Self) -> Self {
        Expr::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Expr::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Expr::mul(self, o)
    }
    fn neg(&self) -> Self {
        Expr::neg(self)
    }
    fn scale(&self, c: &Scalar) -> Self {
        self.scale_by(c)
    }
    fn from_scalar(c: &Scalar) -> Self {
        Expr::constant(c.clone())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(c) => write!(f, "{}", c),
            Node::Atom(i) => write!(f, "a{}", i),
            Node::Add(a, b) => write!(f, "({} + {})", a, b),
            Node::Sub(a, b) => write!(f, "({} - {})", a, b),
            Node::Mul(a, b) => write!(f, "({} * {})", a, b),
            Node::Div(a, b) => write!(f, "({} / {})", a, b),
            Node::Neg(a) => write!(f, "(-{})", a),
            Node::Pow(a, e) => write!(f, "{}^{}", a, e),
            Node::Det(m) => write!(f, "det[{}x{}]", m.rows(), m.cols()),
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Stable identity of a DAG node, used as a cache key.
pub fn expr_key(e: &Expr) -> usize {
    e.key()
}

/// Atom layout for functions on an n-by-n matrix: `x_{ij}` at slot
/// `(i-1)n + (j-1)`.
pub fn x_atom(n: usize, i: usize, j: usize) -> Expr {
    Expr::atom(x_slot(n, i, j))
}

pub fn x_slot(n: usize, i: usize, j: usize) -> usize {
    debug_assert!((1..=n).contains(&i) && (1..=n).contains(&j));
    (i - 1) * n + (j - 1)
}

/// Flatten a matrix into the atom layout above.
pub fn matrix_to_point(x: &Matrix<Scalar>) -> Vec<Scalar> {
    let n = x.rows();
    let mut v = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            v.push(x.at(i, j).clone());
        }
    }
    v
}

/// Matrix of atoms for an n-by-n coordinate space.
pub fn atom_matrix(n: usize) -> Matrix<Expr> {
    Matrix::from_fn(n, n, |i, j| x_atom(n, i, j))
}

/// Dual-number point seeded so that slot `(i-1)n+(j-1)` differentiates with
/// respect to `x_{ij}`.
pub fn dual_point(x: &Matrix<Scalar>) -> Vec<DualScalar> {
    let n = x.rows();
    let mut v = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            v.push(DualScalar::atom(x.at(i, j).clone(), x_slot(n, i, j)));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_degree() {
        // f = (a0 + a1) * a0 / a1
        let f = Expr::atom(0).add(&Expr::atom(1)).mul(&Expr::atom(0)).div(&Expr::atom(1));
        let v = f
            .eval(&[Scalar::from_int(2), Scalar::from_int(3)])
            .unwrap();
        assert_eq!(v, Scalar::ratio(10, 3));
        assert_eq!(f.degree_bound(), (2, 1));
    }

    #[test]
    fn det_node_evaluates() {
        let m = Matrix::from_fn(2, 2, |i, j| Expr::atom((i - 1) * 2 + (j - 1)));
        let f = Expr::det(m);
        let v = f
            .eval(&[1, 2, 3, 4].map(Scalar::from_int).to_vec())
            .unwrap();
        assert_eq!(v, Scalar::from_int(-2));
    }

    #[test]
    fn substitution_rewires_atoms() {
        let f = Expr::atom(0).mul(&Expr::atom(1));
        let g = f.substitute(&|i| if i == 0 { Expr::int(7) } else { Expr::atom(0) });
        let v = g.eval(&[Scalar::from_int(5)]).unwrap();
        assert_eq!(v, Scalar::from_int(35));
    }
}
