import ulid


def generate_run_id() -> str:
    return str(ulid.new())
