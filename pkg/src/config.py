"""
Configuration settings for the tree group toolkit
"""

import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Word engine
ORDER_CAP_EXP = int(os.getenv("ORDER_CAP_EXP", "14"))
CLOSURE_STATE_CAP = int(os.getenv("CLOSURE_STATE_CAP", "1000000"))
SECTION_CACHE_SIZE = int(os.getenv("SECTION_CACHE_SIZE", "262144"))

ENGINE_SETTINGS = {
    "order_cap_exp": ORDER_CAP_EXP,
    "closure_state_cap": CLOSURE_STATE_CAP,
    "section_cache_size": SECTION_CACHE_SIZE,
}

# Level quotients
QUOTIENT_SETTINGS = {
    "max_level": int(os.getenv("QUOTIENT_MAX_LEVEL", "14")),
    "enumeration_cap": int(os.getenv("ENUMERATION_CAP", "1000000")),
}

# Witness searches
SEARCH_SETTINGS = {
    "rist_max_len": int(os.getenv("RIST_MAX_LEN", "10")),
    "square_search_max_len": int(os.getenv("SQUARE_SEARCH_MAX_LEN", "3")),
}

# Logging Configuration
LOGGING_CONFIG = {
    "level": os.getenv("LOG_LEVEL", "WARNING").upper(),
    "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    "handlers": ["console", "file"],
    "file_path": os.getenv("LOG_FILE", "logs/tree_groups.log"),
}

# Validation
for _name, _value in {**ENGINE_SETTINGS, **QUOTIENT_SETTINGS, **SEARCH_SETTINGS}.items():
    if _value <= 0:
        raise ValueError(f"{_name} must be positive, got {_value}")
