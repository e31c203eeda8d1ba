from .config import RunConfig
from .errors import ConfigError, ContractError, LoadError, ParseError, QuarryError, QueryTimeout
