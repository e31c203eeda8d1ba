from . import profiles, queries, random_cases
from .profiles import Profile, build_profile_store
from .queries import QueryFixture
from .random_cases import RandomCase, make_case, random_query, random_store
