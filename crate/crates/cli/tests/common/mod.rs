#![allow(dead_code)]

use std::path::{Path, PathBuf};

use lococo_cli::{run, Outcome};
use lococo_core::complex::SimplicialComplex;
use lococo_core::formats::{ComplexFile, CycleFile, SystemFile};
use lococo_core::intersect::DecomposableCycle;
use lococo_core::localsys::LocalSystem;
use serde::Serialize;
use tempfile::TempDir;

pub struct Workspace {
    dir: TempDir,
}

impl Workspace {
    pub fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> String {
        self.write(name, &serde_json::to_string(value).unwrap())
    }

    pub fn write(&self, name: &str, text: &str) -> String {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }

    pub fn complex(&self, name: &str, x: &SimplicialComplex) -> String {
        self.write_json(name, &ComplexFile::from_complex(x))
    }

    pub fn system(&self, name: &str, e: &LocalSystem) -> String {
        self.write_json(name, &SystemFile::from_system(e))
    }

    pub fn cycle(&self, name: &str, y: &DecomposableCycle) -> String {
        self.write_json(name, &CycleFile::from_cycle(y))
    }

    pub fn root(&self) -> &Path {
        self.dir.path()
    }
}

pub fn lococo(args: &[&str]) -> Outcome {
    run(std::iter::once("lococo").chain(args.iter().copied()))
}
