use std::fmt;

/// How a semi-invariant was built from `t` and named generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConstructionExpr {
    T,
    Gen(String),
    /// Product of powers; factors are kept in the order given.
    Product(Vec<(ConstructionExpr, u32)>),
    St(Box<ConstructionExpr>, Box<ConstructionExpr>, u32),
}

impl ConstructionExpr {
    pub fn gen(name: impl Into<String>) -> Self {
        ConstructionExpr::Gen(name.into())
    }

    pub fn st(lhs: ConstructionExpr, rhs: ConstructionExpr, r: u32) -> Self {
        ConstructionExpr::St(Box::new(lhs), Box::new(rhs), r)
    }

    /// Product of the given factors, collapsing trivial cases.
    pub fn product(factors: Vec<(ConstructionExpr, u32)>) -> Self {
        let mut flat: Vec<(ConstructionExpr, u32)> = Vec::new();
        for (f, e) in factors {
            if e == 0 {
                continue;
            }
            match f {
                ConstructionExpr::Product(inner) => flat.extend(inner.into_iter().map(|(g, k)| (g, k * e))),
                other => flat.push((other, e)),
            }
        }
        match flat.len() {
            1 if flat[0].1 == 1 => flat.pop().unwrap().0,
            _ => ConstructionExpr::Product(flat),
        }
    }

    /// Number of nodes; powers count once per factor.
    pub fn size(&self) -> usize {
        match self {
            ConstructionExpr::T | ConstructionExpr::Gen(_) => 1,
            ConstructionExpr::Product(fs) => fs.iter().map(|(f, _)| f.size()).sum::<usize>().max(1),
            ConstructionExpr::St(a, b, _) => 1 + a.size() + b.size(),
        }
    }

    /// Names of generators referenced anywhere in the tree.
    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ConstructionExpr::T => {}
            ConstructionExpr::Gen(n) => out.push(n),
            ConstructionExpr::Product(fs) => fs.iter().for_each(|(f, _)| f.collect_names(out)),
            ConstructionExpr::St(a, b, _) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }

    /// Replaces every generator name by its own construction.
    pub fn expand(&self, lookup: &impl Fn(&str) -> Option<ConstructionExpr>) -> ConstructionExpr {
        match self {
            ConstructionExpr::T => ConstructionExpr::T,
            ConstructionExpr::Gen(n) => match lookup(n) {
                Some(e) => e.expand(lookup),
                None => self.clone(),
            },
            ConstructionExpr::Product(fs) => {
                ConstructionExpr::Product(fs.iter().map(|(f, e)| (f.expand(lookup), *e)).collect())
            }
            ConstructionExpr::St(a, b, r) => ConstructionExpr::st(a.expand(lookup), b.expand(lookup), *r),
        }
    }
}

impl fmt::Display for ConstructionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionExpr::T => f.write_str("t"),
            ConstructionExpr::Gen(n) => f.write_str(n),
            ConstructionExpr::Product(fs) if fs.is_empty() => f.write_str("1"),
            ConstructionExpr::Product(fs) => {
                for (i, (g, e)) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "{g}")?;
                    if *e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
                Ok(())
            }
            ConstructionExpr::St(a, b, r) => write!(f, "[{a},{b}]^{r}"),
        }
    }
}
