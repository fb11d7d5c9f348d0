"""
Skeleton test file for basic system validation.
"""


class TestImports:
    """Test that core modules can be imported."""

    def test_import_config(self) -> None:
        """Test config module imports."""
        from alexsim.config import Settings, get_settings

        settings = get_settings()
        assert isinstance(settings, Settings)

    def test_import_package(self) -> None:
        """Test the package root re-exports."""
        import alexsim

        assert alexsim.__version__ == "0.1.0"
        assert alexsim.run_mission
        assert alexsim.ChassisGeometry

    def test_import_subpackages(self) -> None:
        """Test every subpackage imports."""
        from alexsim.color import classify
        from alexsim.control import Autopilot
        from alexsim.fuzzy import FuzzyInference
        from alexsim.plant import sim_step
        from alexsim.tuning import new_method_tune

        assert classify and Autopilot and FuzzyInference and sim_step and new_method_tune


class TestConfiguration:
    """Test configuration system."""

    def test_default_settings(self) -> None:
        """Test default settings load correctly."""
        from alexsim.config import Settings, reset_settings

        reset_settings()
        settings = Settings()

        assert settings.simulation.dt_plant == 0.001
        assert settings.simulation.dt_control == 0.01
        assert settings.simulation.watchdog_limit == 50
        assert settings.fuzzy.centroid_samples > 2
        assert settings.logging.level == "INFO"

    def test_environment_is_ignored(self, monkeypatch) -> None:  # type: ignore[no-untyped-def]
        """Test that settings never come from the environment."""
        from alexsim.config import Settings

        monkeypatch.setenv("DEBUG_MODE", "true")
        monkeypatch.setenv("SIMULATION__DT_CONTROL", "0.5")
        settings = Settings()

        assert settings.debug_mode is False
        assert settings.simulation.dt_control == 0.01

    def test_debug_mode_lowers_level(self) -> None:
        """Test debug mode switches logging to DEBUG."""
        from alexsim.config import Settings

        assert Settings(debug_mode=True).logging.level == "DEBUG"

    def test_settings_singleton(self) -> None:
        """Test settings singleton pattern."""
        from alexsim.config import get_settings, reset_settings

        reset_settings()
        s1 = get_settings()
        s2 = get_settings()

        assert s1 is s2
        reset_settings()
        assert get_settings() is not s1
