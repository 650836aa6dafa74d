use tpqhe::Error;

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Core(Error::CapExceeded { .. } | Error::AuditTooLarge(_)) => 3,
            Failure::Core(Error::PostSelection { .. }) => 4,
            Failure::Core(_) => 2,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Input(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}
