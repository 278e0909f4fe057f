import os

import dj_database_url

from .base import BASE_DIR

DATABASES = {
    "default": dj_database_url.config(
        env="DATABASE_URL",
        default=f"sqlite:///{BASE_DIR / 'db.sqlite3'}",
        conn_max_age=int(os.getenv("DATABASE_CONN_MAX_AGE", "60")),
        conn_health_checks=True,
        ssl_require=os.getenv("DATABASE_SSL_REQUIRE", "False") == "True",
    )
}
