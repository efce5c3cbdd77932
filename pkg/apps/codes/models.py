from django.db import models

from .alist import load_alist


class RegisteredCode(models.Model):
    """A parity-check matrix accepted by ``alist_check --register``."""

    name = models.CharField(max_length=255, unique=True)
    identifier = models.CharField(max_length=16, unique=True)
    n = models.PositiveIntegerField()
    m_rows = models.PositiveIntegerField()
    full_rank = models.BooleanField(default=True)
    alist = models.TextField()
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-created_at"]

    def __str__(self):
        return f"{self.name} ({self.n}, {self.k})"

    @property
    def k(self):
        return self.n - self.m_rows

    def to_code(self):
        return load_alist(self.alist, check_rank=False, name=self.name)
