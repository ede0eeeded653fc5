// Bundled demo component sources for one-click analysis.
// Generated from the repository fixtures; keep in sync when those change.

export const DEMO_SOURCES: Record<string, string> = {
  ProductCard: `type ProductCardProps = {
  variant?: "summary" | "detailed"; // layout structure
  title: string;                    // main content
  price: number;                    // numeric content
  imageUrl?: string;                // conditional rendering
  theme?: "light" | "dark";         // styling impact
  showBadge?: boolean;              // conditional rendering
  borderStyle?: "solid" | "dashed"; // low visual impact
};

export const ProductCard: React.FC<ProductCardProps> = ({
  variant = "summary", title, price, imageUrl, 
  theme = "light", showBadge = false, borderStyle = "solid",
}) => {
  return (
    <div className={\`product-card \${theme} 
        border-\${borderStyle}\`}>
      {variant === "detailed" && imageUrl && 
        (<img src={imageUrl} alt={title} />)}
      <h2>{title}</h2>
      {variant === "detailed" && 
        <p className="price">\${price}</p>}
      {showBadge && <span className="badge">New</span>}
    </div>
  );
};
`,
  WeatherCard: `interface ForecastDay {
  label: string;
  high: number;
  low: number;
}

interface WeatherCardProps {
  condition: "sunny" | "cloudy" | "rainy" | "snowy" | "stormy";
  location: string;
  temperature: number;
  unit?: "C" | "F";
  humidity: number;
  forecast: ForecastDay[];
  showHumidity?: boolean;
}

export function WeatherCard({
  condition,
  location,
  temperature,
  unit = "C",
  humidity,
  forecast,
  showHumidity = true,
}: WeatherCardProps) {
  return (
    <div className={\`weather-card weather-\${condition}\`}>
      {condition === "sunny" && <span className="weather-icon">☀️</span>}
      {condition === "rainy" && <span className="weather-icon">🌧️</span>}
      {condition === "snowy" && <span className="weather-icon">❄️</span>}
      <h2>{location}</h2>
      <p className="temperature">
        {temperature}°{unit}
      </p>
      {showHumidity && <p className="humidity">Humidity {humidity}%</p>}
      {forecast.length > 0 && (
        <ul className="forecast">
          {forecast.map((day) => (
            <li key={day.label}>
              <span>{day.label}</span>
              <span>
                {day.high}° / {day.low}°
              </span>
            </li>
          ))}
        </ul>
      )}
    </div>
  );
}
`,
  ProfileCard: `type ProfileCardProps = {
  name: string;
  role: string;
  avatarUrl?: string;
  bio?: string;
  layout?: "horizontal" | "vertical";
  badgeCount?: number;
};

export const ProfileCard = ({
  name,
  role,
  avatarUrl,
  bio,
  layout = "vertical",
  badgeCount = 0,
}: ProfileCardProps) => {
  const header = (
    <header className="profile-header">
      {avatarUrl && <img className="profile-avatar" src={avatarUrl} alt={name} />}
      <h2>{name}</h2>
      {badgeCount > 0 && <span className="profile-badge">{badgeCount}</span>}
      <p className="profile-role">{role}</p>
    </header>
  );
  return layout === "horizontal" ? (
    <div className="profile-card profile-card-row">
      {header}
      {bio && <p className="profile-bio">{bio}</p>}
    </div>
  ) : (
    <div className="profile-card profile-card-column">
      {header}
      {bio && <blockquote className="profile-bio">{bio}</blockquote>}
    </div>
  );
};
`,
};
