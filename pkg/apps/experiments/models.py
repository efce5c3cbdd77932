from django.db import models


class ExperimentRun(models.Model):
    KIND_CHOICES = [
        ("sweep", "Sweep"),
        ("calibrate", "Calibration"),
        ("cascade", "Cascade"),
    ]

    kind = models.CharField(max_length=10, choices=KIND_CHOICES)
    # 64-bit seeds do not fit a signed BigIntegerField
    master_seed = models.CharField(max_length=20)
    config = models.JSONField(default=dict)
    output = models.TextField(blank=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-created_at"]

    def __str__(self):
        return f"{self.kind} run #{self.pk} (seed {self.master_seed})"


class SweepPoint(models.Model):
    run = models.ForeignKey(ExperimentRun, on_delete=models.CASCADE, related_name="points")
    position = models.PositiveIntegerField()
    p_err = models.FloatField()
    n = models.PositiveIntegerField(null=True)
    k = models.PositiveIntegerField(null=True)
    s = models.PositiveIntegerField(null=True)
    p = models.PositiveIntegerField(null=True)
    rate = models.FloatField(null=True)
    frames = models.PositiveIntegerField(default=0)
    frame_errors = models.PositiveIntegerField(default=0)
    leak_bits = models.FloatField(null=True)
    f_code = models.FloatField(null=True)
    f_orig = models.FloatField(null=True)
    f_eff = models.FloatField(null=True)
    key_bound_bits = models.FloatField(null=True)
    status = models.CharField(max_length=12, default="ok")

    class Meta:
        ordering = ["run", "position"]

    def __str__(self):
        return f"p_err={self.p_err} ({self.status})"

    @property
    def fer(self):
        return self.frame_errors / self.frames if self.frames else None
