"""Exception types shared across the pipeline."""


class FormatError(ValueError):
    """Malformed input file (lexicon TSV, corpus TSV, JSON-lines)."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)


class UnknownIdError(LookupError):
    def __init__(self, sentence_id, source="provider"):
        self.sentence_id = sentence_id
        super().__init__(f"unknown sentence id {sentence_id!r} in {source}")

    def __str__(self):
        return self.args[0]


class ConfigError(ValueError):
    pass


class ShapeError(ValueError):
    pass


class EmptySentenceError(ValueError):
    pass


class DegenerateDataError(ValueError):
    pass


class DivergenceError(RuntimeError):
    def __init__(self, epoch, loss):
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"non-finite training loss {loss!r} at epoch {epoch}")
